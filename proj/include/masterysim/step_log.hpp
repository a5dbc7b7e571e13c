#pragma once

#include "masterysim/types.hpp"

#include <filesystem>

namespace masterysim {

struct StepLogRow {
  int student = -1;      // index into StepLog::student_ids
  int skill = -1;        // index into StepLog::skill_model
  int opportunity = 0;   // prior opportunities on (student, skill)
  bool correct = false;
};

// Step-level response log, the input to the AFM fitter. Within each
// (student, skill) pair, opportunity indices run 0,1,2,... without gaps.
struct StepLog {
  SkillModel skill_model;
  std::vector<std::string> student_ids;  // first-appearance order
  std::vector<StepLogRow> rows;

  int n_students() const { return static_cast<int>(student_ids.size()); }
  int n_skills() const { return skill_model.size(); }
};

// Delimited text with header student_id,skill,opportunity,correct.
// The skill model is built from the skills seen, in first-appearance order.
StepLog load_step_log(const std::filesystem::path& path);

void save_step_log(const std::filesystem::path& path, const StepLog& log);

// Rejects gap or out-of-order opportunity indices.
void validate_step_log(const StepLog& log);

} // namespace masterysim
