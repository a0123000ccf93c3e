#include "codedfl/idx_io.hpp"

#include <fstream>
#include <stdexcept>

namespace codedfl::learning {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::istream& in, const std::string& name) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error(name + ": truncated IDX header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

void read_payload(std::istream& in, std::vector<std::uint8_t>& out, const std::string& name) {
  if (!in.read(reinterpret_cast<char*>(out.data()), std::streamsize(out.size())))
    throw std::runtime_error(name + ": truncated IDX payload");
  // A longer-than-declared file indicates a mismatched header.
  if (in.peek() != std::char_traits<char>::eof())
    throw std::runtime_error(name + ": trailing bytes after declared payload");
}

std::ifstream open_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  return in;
}

}  // namespace

IdxImages load_idx_images(std::istream& in, const std::string& name) {
  if (read_be32(in, name) != kImageMagic)
    throw std::runtime_error(name + ": bad IDX image magic");
  IdxImages images;
  images.count = int(read_be32(in, name));
  images.rows = int(read_be32(in, name));
  images.cols = int(read_be32(in, name));
  if (images.count < 0 || images.rows <= 0 || images.cols <= 0)
    throw std::runtime_error(name + ": nonsensical IDX dimensions");
  images.pixels.resize(std::size_t(images.count) * images.rows * images.cols);
  read_payload(in, images.pixels, name);
  return images;
}

IdxImages load_idx_images(const std::string& path) {
  auto in = open_binary(path);
  return load_idx_images(in, path);
}

IdxLabels load_idx_labels(std::istream& in, const std::string& name) {
  if (read_be32(in, name) != kLabelMagic)
    throw std::runtime_error(name + ": bad IDX label magic");
  IdxLabels labels;
  labels.count = int(read_be32(in, name));
  if (labels.count < 0) throw std::runtime_error(name + ": nonsensical IDX dimensions");
  labels.labels.resize(std::size_t(labels.count));
  read_payload(in, labels.labels, name);
  return labels;
}

IdxLabels load_idx_labels(const std::string& path) {
  auto in = open_binary(path);
  return load_idx_labels(in, path);
}

}  // namespace codedfl::learning
