#pragma once

#include "masterysim/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace masterysim {

struct Step {
  int skill = -1;    // index into the governing SkillModel
  int position = 0;  // 0-based index within the problem
};

struct Problem {
  std::string id;
  std::vector<Step> steps;  // prototypical solution path, in order
  int pool_order = 0;       // position in the expert-defined sequence
};

// Pool of multi-step problems with per-problem availability. Each simulated
// student owns an independent copy; there is no shared-mutation contract.
class ProblemPool {
public:
  ProblemPool() = default;
  explicit ProblemPool(std::vector<Problem> problems);

  int size() const { return static_cast<int>(problems_.size()); }
  const Problem& problem(int index) const { return problems_.at(static_cast<std::size_t>(index)); }
  const std::vector<Problem>& problems() const { return problems_; }

  bool is_available(int index) const { return available_.at(static_cast<std::size_t>(index)) != 0; }
  int available_count() const { return available_count_; }
  bool exhausted() const { return available_count_ == 0; }
  int replenish_count() const { return replenish_count_; }
  int total_consumed() const { return total_consumed_; }

  std::optional<int> index_of(std::string_view problem_id) const;

  // Flips the problem to unavailable. The problem must currently be
  // available; consuming twice signals a selector bug.
  void mark_consumed(std::string_view problem_id);

  // Restores all availability flags. The pool must be exhausted.
  void replenish();

private:
  std::vector<Problem> problems_;
  std::unordered_map<std::string, int> by_id_;
  std::vector<std::uint8_t> available_;
  int available_count_ = 0;
  int replenish_count_ = 0;
  int total_consumed_ = 0;
};

// Reads the ordered skill list from a pool file.
SkillModel load_skill_model(const std::filesystem::path& path);

// Parses and validates a pool file against the given skill model. File order
// defines pool_order.
ProblemPool load_pool(const std::filesystem::path& path, const SkillModel& skill_model);

} // namespace masterysim
