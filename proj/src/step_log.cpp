#include "masterysim/step_log.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace masterysim {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

} // namespace

StepLog load_step_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open file: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError(path.string() + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "student_id,skill,opportunity,correct") {
    throw SchemaError(path.string() + ": expected header 'student_id,skill,opportunity,correct'");
  }

  std::vector<std::string> skill_names;
  std::unordered_map<std::string, int> skill_index;
  std::unordered_map<std::string, int> student_index;
  StepLog log;

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 4 fields, got " + std::to_string(fields.size()));
    }
    StepLogRow row;

    auto student_it = student_index.find(fields[0]);
    if (student_it == student_index.end()) {
      student_it = student_index.emplace(fields[0], log.n_students()).first;
      log.student_ids.push_back(fields[0]);
    }
    row.student = student_it->second;

    auto skill_it = skill_index.find(fields[1]);
    if (skill_it == skill_index.end()) {
      skill_it = skill_index.emplace(fields[1], static_cast<int>(skill_names.size())).first;
      skill_names.push_back(fields[1]);
    }
    row.skill = skill_it->second;

    try {
      std::size_t consumed = 0;
      row.opportunity = std::stoi(fields[2], &consumed);
      if (consumed != fields[2].size() || row.opportunity < 0) {
        throw std::invalid_argument("");
      }
    } catch (const std::exception&) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                        ": opportunity must be a non-negative integer, got '" + fields[2] + "'");
    }
    if (fields[3] == "0") {
      row.correct = false;
    } else if (fields[3] == "1") {
      row.correct = true;
    } else {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                        ": correct must be 0 or 1, got '" + fields[3] + "'");
    }
    log.rows.push_back(row);
  }
  if (log.rows.empty()) {
    throw SchemaError(path.string() + ": log contains no rows");
  }
  log.skill_model = SkillModel(std::move(skill_names));
  validate_step_log(log);
  return log;
}

void save_step_log(const std::filesystem::path& path, const StepLog& log) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path.string());
  }
  out << "student_id,skill,opportunity,correct\n";
  for (const StepLogRow& row : log.rows) {
    out << log.student_ids[static_cast<std::size_t>(row.student)] << ','
        << log.skill_model.name(row.skill) << ',' << row.opportunity << ','
        << (row.correct ? 1 : 0) << '\n';
  }
}

void validate_step_log(const StepLog& log) {
  std::map<std::pair<int, int>, int> next_opportunity;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const StepLogRow& row = log.rows[i];
    int& expected = next_opportunity[{row.student, row.skill}];
    if (row.opportunity != expected) {
      throw SchemaError("step log row " + std::to_string(i + 1) + ": student '" +
                        log.student_ids[static_cast<std::size_t>(row.student)] + "' skill '" +
                        log.skill_model.name(row.skill) + "' has opportunity " +
                        std::to_string(row.opportunity) + ", expected " +
                        std::to_string(expected));
    }
    ++expected;
  }
}

} // namespace masterysim
