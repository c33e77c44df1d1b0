#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wmi/error.hpp"
#include "wmi/image.hpp"
#include "wmi/phantom.hpp"

namespace wmi {

enum class IoErrorKind {
  missing_file,
  unreadable,
  dimension_mismatch,
  missing_truth,
  empty_manifest,
  write_failed,
};

class IoError : public Error {
 public:
  IoError(IoErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  IoErrorKind kind() const noexcept { return kind_; }

 private:
  IoErrorKind kind_;
};

// Binary 8-bit PGM (P5, maxval <= 255). Comments in the header are skipped.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

// Mask as PGM: nonzero pixels become 1 on read, 255 on write.
BinaryMask read_mask_pgm(const std::filesystem::path& path);
void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask);

// Grayscale slice with mask pixels painted pure red, as binary PPM (P6).
void write_overlay_ppm(const std::filesystem::path& path, const GrayImage& image, const BinaryMask& mask);

struct ManifestEntry {
  std::filesystem::path slice;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> brain;
};

// One slice per line: slice[<TAB>truth[<TAB>brain]]. Relative paths resolve
// against the manifest's directory; blank lines and '#' lines are ignored.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

struct SliceStack {
  std::vector<std::string> names;  // file name of each slice
  std::vector<GrayImage> slices;
};

// Loads every slice of a manifest and checks that all share one shape.
SliceStack load_slices(const std::vector<ManifestEntry>& entries);

// Writes one PGM per slice and mask under `dir`, plus a manifest.txt that
// references them.
void write_phantom_stack(const std::filesystem::path& dir, const PhantomStack& stack);

}  // namespace wmi
