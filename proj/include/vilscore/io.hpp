#pragma once

// Frame, sequence, and manifest I/O. Supported frame formats:
//   .pgm        binary PGM (P5), maxval 255
//   .raw/.bin   unsigned bytes, row-major, JSON sidecar <path>.json
//               holding {"width": W, "height": H}
//   .npy        NPY v1.0, dtype u1, shape (H, W) for frames or (T, H, W)
//               for sequences
// Paths inside a manifest resolve relative to the manifest's directory.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core.hpp"

namespace vilscore {

enum class IoErrorKind {
  MissingFile,
  MalformedHeader,
  UnsupportedDepth,
  InvalidDimensions,
  ValueOutOfRange,
  UnknownFormat,
  TruncatedPayload,
};

class IoError : public std::runtime_error {
 public:
  IoError(IoErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  IoErrorKind kind() const { return kind_; }

 private:
  IoErrorKind kind_;
};

// Ground truth and prediction could not be paired (count or shape mismatch).
class PairingError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<char> read_all_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(IoErrorKind::MissingFile, "cannot open " + path.string());
  }
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

inline void write_all_bytes(const std::filesystem::path& path, const void* data, std::size_t n) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(IoErrorKind::MissingFile, "cannot write " + path.string());
  }
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out) {
    throw IoError(IoErrorKind::TruncatedPayload, "short write to " + path.string());
  }
}

// Skips PGM whitespace and '#' comment lines, then reads one decimal token.
inline int pgm_token(const std::vector<char>& bytes, std::size_t& pos, const std::string& path) {
  while (pos < bytes.size()) {
    char c = bytes[pos];
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    throw IoError(IoErrorKind::MalformedHeader, "malformed PGM header in " + path);
  }
  long value = 0;
  while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    value = value * 10 + (bytes[pos] - '0');
    if (value > 1'000'000) {
      throw IoError(IoErrorKind::MalformedHeader, "absurd PGM header value in " + path);
    }
    ++pos;
  }
  return static_cast<int>(value);
}

inline RadarFrame frame_from_bytes(int width, int height, const char* data, std::size_t n,
                                   const std::string& path) {
  if (width < 3 || height < 3) {
    throw IoError(IoErrorKind::InvalidDimensions,
                  path + ": dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                      " below the 3x3 minimum");
  }
  std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (n < expected) {
    throw IoError(IoErrorKind::TruncatedPayload, path + ": payload shorter than declared size");
  }
  std::vector<std::uint8_t> values(expected);
  std::memcpy(values.data(), data, expected);
  for (std::uint8_t v : values) {
    if (v > kMaxIntensity) {
      throw IoError(IoErrorKind::ValueOutOfRange,
                    path + ": intensity code " + std::to_string(int(v)) + " outside [0, 254]");
    }
  }
  return RadarFrame(width, height, std::move(values));
}

// ---- NPY v1.0, u1 only --------------------------------------------------

struct NpyHeader {
  std::vector<long> shape;
  std::size_t payload_offset = 0;
};

inline NpyHeader parse_npy_header(const std::vector<char>& bytes, const std::string& path) {
  static const char magic[] = "\x93NUMPY";
  if (bytes.size() < 10 || std::memcmp(bytes.data(), magic, 6) != 0) {
    throw IoError(IoErrorKind::MalformedHeader, path + ": not an NPY file");
  }
  unsigned major = static_cast<unsigned char>(bytes[6]);
  if (major != 1) {
    throw IoError(IoErrorKind::UnsupportedDepth,
                  path + ": NPY version " + std::to_string(major) + " not supported");
  }
  std::size_t header_len = static_cast<unsigned char>(bytes[8]) |
                           (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
  if (bytes.size() < 10 + header_len) {
    throw IoError(IoErrorKind::MalformedHeader, path + ": truncated NPY header");
  }
  std::string header(bytes.data() + 10, header_len);

  auto find_value = [&](const std::string& key) -> std::string {
    auto kpos = header.find("'" + key + "'");
    if (kpos == std::string::npos) {
      throw IoError(IoErrorKind::MalformedHeader, path + ": NPY header missing " + key);
    }
    auto colon = header.find(':', kpos);
    return header.substr(colon + 1);
  };

  std::string descr = find_value("descr");
  auto q1 = descr.find('\'');
  auto q2 = descr.find('\'', q1 + 1);
  std::string dtype = descr.substr(q1 + 1, q2 - q1 - 1);
  if (dtype != "|u1" && dtype != "u1" && dtype != "<u1") {
    throw IoError(IoErrorKind::UnsupportedDepth, path + ": NPY dtype " + dtype + " not supported");
  }
  if (find_value("fortran_order").find("True") != std::string::npos) {
    throw IoError(IoErrorKind::UnsupportedDepth, path + ": Fortran-order NPY not supported");
  }

  std::string shape_str = find_value("shape");
  auto open = shape_str.find('(');
  auto close = shape_str.find(')');
  if (open == std::string::npos || close == std::string::npos) {
    throw IoError(IoErrorKind::MalformedHeader, path + ": malformed NPY shape");
  }
  NpyHeader out;
  std::stringstream ss(shape_str.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.shape.push_back(std::stol(item));
  }
  out.payload_offset = 10 + header_len;
  return out;
}

inline void write_npy(const std::filesystem::path& path, const std::vector<long>& shape,
                      const std::uint8_t* data, std::size_t n) {
  std::string dict = "{'descr': '|u1', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    dict += std::to_string(shape[i]);
    if (shape.size() == 1 || i + 1 < shape.size()) dict += ",";
    if (i + 1 < shape.size()) dict += " ";
  }
  dict += "), }";
  std::size_t unpadded = 10 + dict.size() + 1;
  std::size_t padded = (unpadded + 63) / 64 * 64;
  dict.append(padded - unpadded, ' ');
  dict += '\n';

  std::string blob;
  blob += "\x93NUMPY";
  blob += '\x01';
  blob += '\x00';
  std::size_t hlen = dict.size();
  blob += static_cast<char>(hlen & 0xff);
  blob += static_cast<char>((hlen >> 8) & 0xff);
  blob += dict;
  blob.append(reinterpret_cast<const char*>(data), n);
  write_all_bytes(path, blob.data(), blob.size());
}

}  // namespace detail

// --------------------------------------------------------------------------
// Frame read/write
// --------------------------------------------------------------------------

inline RadarFrame read_pgm(const std::filesystem::path& path) {
  auto bytes = detail::read_all_bytes(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw IoError(IoErrorKind::MalformedHeader, path.string() + ": not a binary PGM (P5)");
  }
  std::size_t pos = 2;
  int width = detail::pgm_token(bytes, pos, path.string());
  int height = detail::pgm_token(bytes, pos, path.string());
  int maxval = detail::pgm_token(bytes, pos, path.string());
  if (maxval != 255) {
    throw IoError(IoErrorKind::UnsupportedDepth,
                  path.string() + ": PGM maxval " + std::to_string(maxval) +
                      " not supported (8-bit only)");
  }
  ++pos;  // exactly one whitespace byte separates header and payload
  return detail::frame_from_bytes(width, height, bytes.data() + pos, bytes.size() - pos,
                                  path.string());
}

inline void write_pgm(const std::filesystem::path& path, const RadarFrame& frame) {
  std::string header = "P5\n" + std::to_string(frame.width()) + " " +
                       std::to_string(frame.height()) + "\n255\n";
  std::string blob = header;
  blob.append(reinterpret_cast<const char*>(frame.values().data()), frame.pixel_count());
  detail::write_all_bytes(path, blob.data(), blob.size());
}

inline RadarFrame read_raw(const std::filesystem::path& path) {
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  if (!std::filesystem::exists(sidecar)) {
    throw IoError(IoErrorKind::MissingFile, "sidecar " + sidecar.string() + " not found");
  }
  auto side_bytes = detail::read_all_bytes(sidecar);
  auto j = nlohmann::json::parse(side_bytes.begin(), side_bytes.end(), nullptr, false);
  if (j.is_discarded() || !j.contains("width") || !j.contains("height") ||
      !j["width"].is_number_integer() || !j["height"].is_number_integer()) {
    throw IoError(IoErrorKind::MalformedHeader, sidecar.string() + ": invalid sidecar");
  }
  auto bytes = detail::read_all_bytes(path);
  return detail::frame_from_bytes(j["width"].get<int>(), j["height"].get<int>(), bytes.data(),
                                  bytes.size(), path.string());
}

inline void write_raw(const std::filesystem::path& path, const RadarFrame& frame) {
  detail::write_all_bytes(path, frame.values().data(), frame.pixel_count());
  nlohmann::ordered_json j;
  j["width"] = frame.width();
  j["height"] = frame.height();
  std::string side = j.dump();
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  detail::write_all_bytes(sidecar, side.data(), side.size());
}

inline RadarFrame read_npy_frame(const std::filesystem::path& path) {
  auto bytes = detail::read_all_bytes(path);
  auto header = detail::parse_npy_header(bytes, path.string());
  if (header.shape.size() != 2) {
    throw IoError(IoErrorKind::InvalidDimensions,
                  path.string() + ": expected a (H, W) array for a single frame");
  }
  int h = static_cast<int>(header.shape[0]);
  int w = static_cast<int>(header.shape[1]);
  return detail::frame_from_bytes(w, h, bytes.data() + header.payload_offset,
                                  bytes.size() - header.payload_offset, path.string());
}

inline void write_npy_frame(const std::filesystem::path& path, const RadarFrame& frame) {
  detail::write_npy(path, {frame.height(), frame.width()}, frame.values().data(),
                    frame.pixel_count());
}

inline RadarSequence read_npy_sequence(const std::filesystem::path& path) {
  auto bytes = detail::read_all_bytes(path);
  auto header = detail::parse_npy_header(bytes, path.string());
  if (header.shape.size() == 2) {
    return RadarSequence({read_npy_frame(path)});
  }
  if (header.shape.size() != 3) {
    throw IoError(IoErrorKind::InvalidDimensions,
                  path.string() + ": expected (T, H, W) for a sequence");
  }
  long t = header.shape[0];
  int h = static_cast<int>(header.shape[1]);
  int w = static_cast<int>(header.shape[2]);
  if (t < 1) {
    throw IoError(IoErrorKind::InvalidDimensions, path.string() + ": empty sequence");
  }
  std::vector<RadarFrame> frames;
  frames.reserve(static_cast<std::size_t>(t));
  std::size_t frame_bytes = static_cast<std::size_t>(w) * h;
  for (long i = 0; i < t; ++i) {
    std::size_t off = header.payload_offset + static_cast<std::size_t>(i) * frame_bytes;
    if (off + frame_bytes > bytes.size()) {
      throw IoError(IoErrorKind::TruncatedPayload, path.string() + ": truncated sequence payload");
    }
    frames.push_back(detail::frame_from_bytes(w, h, bytes.data() + off, frame_bytes, path.string()));
  }
  return RadarSequence(std::move(frames));
}

inline void write_npy_sequence(const std::filesystem::path& path, const RadarSequence& seq) {
  std::vector<std::uint8_t> flat;
  flat.reserve(seq.size() * seq[0].pixel_count());
  for (const auto& f : seq.frames()) {
    flat.insert(flat.end(), f.values().begin(), f.values().end());
  }
  detail::write_npy(path, {static_cast<long>(seq.size()), seq.height(), seq.width()}, flat.data(),
                    flat.size());
}

// Dispatch on extension: .pgm, .npy, .raw/.bin.
inline RadarFrame read_frame(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".npy") return read_npy_frame(path);
  if (ext == ".raw" || ext == ".bin") return read_raw(path);
  throw IoError(IoErrorKind::UnknownFormat, path.string() + ": unknown frame format " + ext);
}

inline void write_frame(const std::filesystem::path& path, const RadarFrame& frame) {
  auto ext = path.extension().string();
  if (ext == ".pgm") return write_pgm(path, frame);
  if (ext == ".npy") return write_npy_frame(path, frame);
  if (ext == ".raw" || ext == ".bin") return write_raw(path, frame);
  throw IoError(IoErrorKind::UnknownFormat, path.string() + ": unknown frame format " + ext);
}

// --------------------------------------------------------------------------
// Manifest
// --------------------------------------------------------------------------

enum class ManifestKind { Frame, Sequence };

// Pairs a ground-truth source with a prediction source. Each side is either
// one path (single frame, or a (T,H,W) NPY stack) or a list of frame paths.
struct PairManifest {
  ManifestKind kind = ManifestKind::Sequence;
  std::vector<std::filesystem::path> ground_truth;
  std::vector<std::filesystem::path> prediction;
  std::map<std::string, std::string> metadata;
};

inline PairManifest read_manifest(const std::filesystem::path& path) {
  auto bytes = detail::read_all_bytes(path);
  auto j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw IoError(IoErrorKind::MalformedHeader, path.string() + ": manifest is not a JSON object");
  }
  PairManifest m;
  std::string kind = j.value("kind", "sequence");
  if (kind == "frame") m.kind = ManifestKind::Frame;
  else if (kind == "sequence") m.kind = ManifestKind::Sequence;
  else throw IoError(IoErrorKind::MalformedHeader, path.string() + ": unknown kind " + kind);

  auto base = path.parent_path();
  auto read_side = [&](const char* key) {
    std::vector<std::filesystem::path> out;
    if (!j.contains(key)) {
      throw IoError(IoErrorKind::MalformedHeader, path.string() + ": manifest missing " + key);
    }
    const auto& side = j[key];
    if (side.is_string()) {
      out.push_back(base / side.get<std::string>());
    } else if (side.is_array()) {
      for (const auto& item : side) {
        if (!item.is_string()) {
          throw IoError(IoErrorKind::MalformedHeader, path.string() + ": non-string path in " + key);
        }
        out.push_back(base / item.get<std::string>());
      }
    } else {
      throw IoError(IoErrorKind::MalformedHeader,
                    path.string() + ": " + key + " must be a path or list of paths");
    }
    return out;
  };
  m.ground_truth = read_side("ground_truth");
  m.prediction = read_side("prediction");
  if (j.contains("metadata")) {
    for (auto& [k, v] : j["metadata"].items()) {
      m.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return m;
}

namespace detail {

inline RadarSequence load_side(const std::vector<std::filesystem::path>& paths) {
  if (paths.size() == 1 && paths[0].extension() == ".npy") {
    return read_npy_sequence(paths[0]);
  }
  std::vector<RadarFrame> frames;
  frames.reserve(paths.size());
  for (const auto& p : paths) frames.push_back(read_frame(p));
  return RadarSequence(std::move(frames));
}

}  // namespace detail

// Loads both sides of a manifest and enforces pairing: equal frame counts
// and identical dimensions.
inline std::pair<RadarSequence, RadarSequence> read_sequence_pair(const PairManifest& m) {
  RadarSequence gt = detail::load_side(m.ground_truth);
  RadarSequence pred = detail::load_side(m.prediction);
  if (gt.size() != pred.size()) {
    throw PairingError("sequence length mismatch: ground truth has " + std::to_string(gt.size()) +
                       " frames, prediction has " + std::to_string(pred.size()));
  }
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw PairingError("dimension mismatch: ground truth is " + std::to_string(gt.width()) + "x" +
                       std::to_string(gt.height()) + ", prediction is " +
                       std::to_string(pred.width()) + "x" + std::to_string(pred.height()));
  }
  return {std::move(gt), std::move(pred)};
}

}  // namespace vilscore
