#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace masterysim {

using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

// Raised when an input file or config document violates its schema.
class SchemaError : public std::runtime_error {
public:
  explicit SchemaError(const std::string& message) : std::runtime_error(message) {}
};

struct SkillId {
  int index = -1;
  std::string name;
};

// Closed, ordered set of skills. Indices are 0..n-1 in declaration order.
class SkillModel {
public:
  SkillModel() = default;
  explicit SkillModel(std::vector<std::string> names);

  int size() const { return static_cast<int>(skills_.size()); }
  const SkillId& skill(int index) const { return skills_.at(static_cast<std::size_t>(index)); }
  const std::string& name(int index) const { return skill(index).name; }
  const std::vector<SkillId>& skills() const { return skills_; }

  std::optional<int> index_of(std::string_view name) const;

  bool operator==(const SkillModel& other) const;

private:
  std::vector<SkillId> skills_;
  std::unordered_map<std::string, int> by_name_;
};

double sigmoid(double x);

// log(1 + e^x) without overflow for large |x|.
double softplus(double x);

} // namespace masterysim
