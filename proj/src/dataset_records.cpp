#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "molpipe/dataset.h"
#include "molpipe/error.h"
#include "molpipe/resources.h"

namespace molpipe {

std::string_view to_string(Task t) {
  switch (t) {
    case Task::kFragmentation: return "fragmentation";
    case Task::kRecombination: return "recombination";
    case Task::kRetrosynthesis: return "retrosynthesis";
    case Task::kReaction: return "reaction";
  }
  return "?";
}

std::string_view to_string(Direction d) {
  return d == Direction::kForward ? "forward" : "backward";
}

Task parse_task(std::string_view text) {
  for (Task t: { Task::kFragmentation, Task::kRecombination,
                 Task::kRetrosynthesis, Task::kReaction })
    if (to_string(t) == text)
      return t;
  throw FormatError("unknown task '" + std::string(text) + "'");
}

Direction direction_of(Task t) {
  return t == Task::kFragmentation || t == Task::kRetrosynthesis
             ? Direction::kForward
             : Direction::kBackward;
}

std::string to_jsonl(const InstructionRecord &r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["task"] = to_string(r.task);
  j["direction"] = to_string(r.direction);
  j["instruction"] = r.instruction;
  j["input"] = r.input;
  j["output"] = r.output;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto &[k, v]: r.meta)
    meta[k] = v;
  j["meta"] = std::move(meta);
  return j.dump();
}

InstructionRecord parse_jsonl(std::string_view line) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("bad JSONL record: ") + e.what());
  }
  InstructionRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.task = parse_task(j.at("task").get<std::string>());
    const std::string dir = j.at("direction").get<std::string>();
    if (dir != "forward" && dir != "backward")
      throw FormatError("bad direction '" + dir + "'");
    r.direction = dir == "forward" ? Direction::kForward : Direction::kBackward;
    r.instruction = j.at("instruction").get<std::string>();
    r.input = j.at("input").get<std::string>();
    r.output = j.at("output").get<std::string>();
    for (const auto &[k, v]: j.at("meta").items())
      r.meta.emplace_back(k, v.get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("bad JSONL record: ") + e.what());
  }
  return r;
}

TemplateSet TemplateSet::parse(std::string_view text) {
  TemplateSet set;
  std::istringstream in { std::string(text) };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line.front() == '#')
      continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError("templates line " + std::to_string(line_no)
                        + ": expected task<TAB>template");
    const Task task = parse_task(line.substr(0, tab));
    if (!set.templates_.emplace(task, line.substr(tab + 1)).second)
      throw FormatError("templates line " + std::to_string(line_no)
                        + ": duplicate task " + line.substr(0, tab));
  }
  return set;
}

const TemplateSet &TemplateSet::builtin() {
  static const TemplateSet set = parse(resources::templates());
  return set;
}

const std::string &TemplateSet::get(Task t) const {
  const auto it = templates_.find(t);
  if (it == templates_.end())
    throw TemplateError("no template for task " + std::string(to_string(t)));
  return it->second;
}

std::string fill_template(
    const TemplateSet &templates, Task task, std::string_view payload,
    const std::vector<std::pair<std::string, std::string>> &meta) {
  const std::string &tpl = templates.get(task);
  std::string out;
  std::size_t i = 0;
  while (i < tpl.size()) {
    const char c = tpl[i];
    if (c == '}')
      throw TemplateError("unbalanced '}' in " + std::string(to_string(task))
                          + " template");
    if (c != '{') {
      out += c;
      ++i;
      continue;
    }
    const std::size_t close = tpl.find('}', i + 1);
    if (close == std::string::npos)
      throw TemplateError("unterminated slot in " + std::string(to_string(task))
                          + " template");
    const std::string slot = tpl.substr(i + 1, close - i - 1);
    if (slot == "input") {
      out += payload;
    } else {
      const auto it = std::find_if(meta.begin(), meta.end(),
                                   [&](const auto &kv) { return kv.first == slot; });
      if (it == meta.end())
        throw TemplateError("missing value for slot {" + slot + "} in "
                            + std::string(to_string(task)) + " template");
      out += it->second;
    }
    i = close + 1;
  }
  return out;
}

}  // namespace molpipe
