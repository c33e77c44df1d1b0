#include "wmi/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wmi {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path) {
  if (!fs::exists(path)) throw IoError(IoErrorKind::missing_file, "no such file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrorKind::unreadable, "cannot open: " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoErrorKind::write_failed, "cannot write: " + path.string());
  return out;
}

// Next whitespace-delimited header token, skipping '#' comments.
bool header_token(std::istream& in, std::string& token) {
  token.clear();
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch) && ch != '#') {
    token.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  if (ch == '#') in.putback('#');
  return !token.empty();
}

int header_int(std::istream& in, const fs::path& path, const char* field) {
  std::string tok;
  if (!header_token(in, tok)) {
    throw IoError(IoErrorKind::unreadable, path.string() + ": truncated header (" + field + ")");
  }
  int value = 0;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c)) || value > 1'000'000) {
      throw IoError(IoErrorKind::unreadable, path.string() + ": bad " + field + " '" + tok + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

void check_written(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError(IoErrorKind::write_failed, "write failed: " + path.string());
}

}  // namespace

GrayImage read_pgm(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::string magic;
  if (!header_token(in, magic) || magic != "P5") {
    throw IoError(IoErrorKind::unreadable, path.string() + ": not a binary PGM (P5)");
  }
  const int w = header_int(in, path, "width");
  const int h = header_int(in, path, "height");
  const int maxval = header_int(in, path, "maxval");
  if (maxval < 1 || maxval > 255) {
    throw IoError(IoErrorKind::unreadable, path.string() + ": only 8-bit PGM is supported");
  }
  if (w < kMinRasterSide || h < kMinRasterSide) {
    throw IoError(IoErrorKind::unreadable, path.string() + ": image smaller than " +
                                               std::to_string(kMinRasterSide) + "x" +
                                               std::to_string(kMinRasterSide));
  }
  GrayImage img(w, h);
  in.read(reinterpret_cast<char*>(img.pixels().data()), static_cast<std::streamsize>(img.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.size())) {
    throw IoError(IoErrorKind::unreadable, path.string() + ": truncated pixel data");
  }
  return img;
}

void write_pgm(const fs::path& path, const GrayImage& image) {
  std::ofstream out = open_output(path);
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels().data()), static_cast<std::streamsize>(image.size()));
  check_written(out, path);
}

BinaryMask read_mask_pgm(const fs::path& path) {
  const GrayImage g = read_pgm(path);
  BinaryMask m(g.width(), g.height(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) m[i] = g[i] ? 1 : 0;
  return m;
}

void write_mask_pgm(const fs::path& path, const BinaryMask& mask) {
  GrayImage g(mask.width(), mask.height(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) g[i] = mask[i] ? 255 : 0;
  write_pgm(path, g);
}

void write_overlay_ppm(const fs::path& path, const GrayImage& image, const BinaryMask& mask) {
  require_same_shape(image, mask, "write_overlay_ppm");
  std::ofstream out = open_output(path);
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<char> rgb(image.size() * 3);
  for (std::size_t i = 0; i < image.size(); ++i) {
    const auto v = static_cast<char>(image[i]);
    rgb[3 * i] = mask[i] ? static_cast<char>(255) : v;
    rgb[3 * i + 1] = mask[i] ? 0 : v;
    rgb[3 * i + 2] = mask[i] ? 0 : v;
  }
  out.write(rgb.data(), static_cast<std::streamsize>(rgb.size()));
  check_written(out, path);
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in = open_input(path);
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) {
      if (!field.empty()) fields.push_back(field);
    }
    if (fields.empty() || fields.size() > 3) {
      throw IoError(IoErrorKind::empty_manifest, path.string() + ": malformed line '" + line + "'");
    }
    ManifestEntry e;
    e.slice = resolve(fields[0]);
    if (fields.size() > 1) e.truth = resolve(fields[1]);
    if (fields.size() > 2) e.brain = resolve(fields[2]);
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw IoError(IoErrorKind::empty_manifest, path.string() + ": manifest lists no slices");
  return entries;
}

SliceStack load_slices(const std::vector<ManifestEntry>& entries) {
  if (entries.empty()) throw IoError(IoErrorKind::empty_manifest, "manifest lists no slices");
  SliceStack stack;
  for (const auto& e : entries) {
    GrayImage img = read_pgm(e.slice);
    if (!stack.slices.empty() && !img.same_shape(stack.slices.front())) {
      throw IoError(IoErrorKind::dimension_mismatch,
                    e.slice.string() + ": " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                        " differs from the first slice (" + std::to_string(stack.slices.front().width()) + "x" +
                        std::to_string(stack.slices.front().height()) + ")");
    }
    stack.names.push_back(e.slice.filename().string());
    stack.slices.push_back(std::move(img));
  }
  return stack;
}

void write_phantom_stack(const fs::path& dir, const PhantomStack& stack) {
  fs::create_directories(dir / "slices");
  fs::create_directories(dir / "truth");
  fs::create_directories(dir / "brain");
  std::ofstream manifest = open_output(dir / "manifest.txt");
  for (std::size_t i = 0; i < stack.slices.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "slice_%04zu.pgm", i);
    write_pgm(dir / "slices" / name, stack.slices[i]);
    write_mask_pgm(dir / "truth" / name, stack.truth[i].lesion);
    write_mask_pgm(dir / "brain" / name, stack.truth[i].brain);
    manifest << "slices/" << name << "\ttruth/" << name << "\tbrain/" << name << '\n';
  }
  check_written(manifest, dir / "manifest.txt");
}

}  // namespace wmi
