#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>

#include "foels/image.hpp"

namespace foels {

/// Panoptic labels for one frame. instance_id 0 marks "stuff" (no instance).
struct PanopticMap {
  Grid<int> class_id;
  Grid<int> instance_id;

  PanopticMap() = default;
  PanopticMap(int width, int height, int cls = 0, int inst = 0)
      : class_id(width, height, cls), instance_id(width, height, inst) {}

  int width() const { return class_id.width(); }
  int height() const { return class_id.height(); }
  std::size_t size() const { return class_id.size(); }
};

struct ClassEntry {
  double prior = 0.0;
  bool is_sky = false;
  std::string name;
};

/// Class id -> prior moving probability. Immutable once loaded.
class ClassPriorTable {
 public:
  /// Throws DuplicateClass / PriorOutOfRange.
  void add(int class_id, ClassEntry entry);

  const ClassEntry& at(int class_id) const;  // UnknownClass
  bool contains(int class_id) const { return entries_.contains(class_id); }
  std::size_t size() const { return entries_.size(); }
  const std::map<int, ClassEntry>& entries() const { return entries_; }

 private:
  std::map<int, ClassEntry> entries_;
};

/// Line format: `<class_id> <prior> <sky|-> <name>`; `#` starts a comment.
ClassPriorTable load_class_table(std::istream& in);
ClassPriorTable load_class_table(const std::filesystem::path& path);

/// Reads `<stem>.class.pgm` / `<stem>.inst.pgm` style label files.
PanopticMap load_panoptic(const std::filesystem::path& class_path,
                          const std::filesystem::path& instance_path);
void save_panoptic(const std::filesystem::path& class_path,
                   const std::filesystem::path& instance_path, const PanopticMap& seg);

ProbabilityMap prior_map(const PanopticMap& seg, const ClassPriorTable& table);

/// True where the prior is strictly below tau_static.
BinaryMask static_mask(const ProbabilityMap& prior, double tau_static);

BinaryMask sky_mask(const PanopticMap& seg, const ClassPriorTable& table);

}  // namespace foels
