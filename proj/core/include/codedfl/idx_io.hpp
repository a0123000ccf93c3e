#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace codedfl::learning {

/// Raw contents of an IDX image file (magic 0x00000803).
struct IdxImages {
  int count = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols, row-major per image
};

/// Raw contents of an IDX label file (magic 0x00000801).
struct IdxLabels {
  int count = 0;
  std::vector<std::uint8_t> labels;
};

IdxImages load_idx_images(std::istream& in, const std::string& name = "<stream>");
IdxImages load_idx_images(const std::string& path);
IdxLabels load_idx_labels(std::istream& in, const std::string& name = "<stream>");
IdxLabels load_idx_labels(const std::string& path);

}  // namespace codedfl::learning
