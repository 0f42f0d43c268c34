#include "foels/segmentation_prior.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "foels/image_io.hpp"

namespace foels {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
bool parse_number(const std::string& token, T& value) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

void ClassPriorTable::add(int class_id, ClassEntry entry) {
  if (!(entry.prior >= 0.0 && entry.prior <= 1.0)) {
    throw Error(ErrorCode::kPriorOutOfRange, "class " + std::to_string(class_id));
  }
  if (!entries_.emplace(class_id, std::move(entry)).second) {
    throw Error(ErrorCode::kDuplicateClass, "class " + std::to_string(class_id));
  }
}

const ClassEntry& ClassPriorTable::at(int class_id) const {
  const auto it = entries_.find(class_id);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kUnknownClass, "class id " + std::to_string(class_id));
  }
  return it->second;
}

ClassPriorTable load_class_table(std::istream& in) {
  ClassPriorTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    std::istringstream fields(line);
    std::string id_token, prior_token, sky_token;
    fields >> id_token >> prior_token >> sky_token;
    std::string name;
    std::getline(fields, name);
    name = trim(name);

    const std::string where = "line " + std::to_string(line_no);
    int id = 0;
    double prior = 0.0;
    if (!parse_number(id_token, id) || id < 0) {
      throw Error(ErrorCode::kParseError, where + ": bad class id '" + id_token + "'");
    }
    if (!parse_number(prior_token, prior)) {
      throw Error(ErrorCode::kParseError, where + ": bad prior '" + prior_token + "'");
    }
    if (sky_token != "sky" && sky_token != "-") {
      throw Error(ErrorCode::kParseError, where + ": sky flag must be 'sky' or '-'");
    }
    if (name.empty()) throw Error(ErrorCode::kParseError, where + ": missing class name");
    table.add(id, {prior, sky_token == "sky", name});
  }
  return table;
}

ClassPriorTable load_class_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  return load_class_table(in);
}

PanopticMap load_panoptic(const std::filesystem::path& class_path,
                          const std::filesystem::path& instance_path) {
  const LabelImage classes = load_pgm(class_path);
  const LabelImage instances = load_pgm(instance_path);
  require_same_shape(classes, instances, "class and instance maps differ in size");
  PanopticMap seg(classes.width(), classes.height());
  for (std::size_t i = 0; i < seg.size(); ++i) {
    seg.class_id[i] = classes[i];
    seg.instance_id[i] = instances[i];
  }
  return seg;
}

void save_panoptic(const std::filesystem::path& class_path,
                   const std::filesystem::path& instance_path, const PanopticMap& seg) {
  LabelImage classes(seg.width(), seg.height());
  LabelImage instances(seg.width(), seg.height());
  for (std::size_t i = 0; i < seg.size(); ++i) {
    if (seg.class_id[i] < 0 || seg.class_id[i] > 65535 || seg.instance_id[i] < 0 ||
        seg.instance_id[i] > 65535) {
      throw Error(ErrorCode::kInvalidArgument, "label does not fit in 16 bits");
    }
    classes[i] = static_cast<std::uint16_t>(seg.class_id[i]);
    instances[i] = static_cast<std::uint16_t>(seg.instance_id[i]);
  }
  save_pgm16(class_path, classes);
  save_pgm16(instance_path, instances);
}

ProbabilityMap prior_map(const PanopticMap& seg, const ClassPriorTable& table) {
  ProbabilityMap prior(seg.width(), seg.height());
  for (std::size_t i = 0; i < seg.size(); ++i) prior[i] = table.at(seg.class_id[i]).prior;
  return prior;
}

BinaryMask static_mask(const ProbabilityMap& prior, double tau_static) {
  if (!(tau_static > 0.0 && tau_static < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau_static must lie in (0, 1)");
  }
  BinaryMask mask(prior.width(), prior.height());
  for (std::size_t i = 0; i < prior.size(); ++i) mask[i] = prior[i] < tau_static;
  return mask;
}

BinaryMask sky_mask(const PanopticMap& seg, const ClassPriorTable& table) {
  BinaryMask mask(seg.width(), seg.height());
  for (std::size_t i = 0; i < seg.size(); ++i) mask[i] = table.at(seg.class_id[i]).is_sky;
  return mask;
}

}  // namespace foels
