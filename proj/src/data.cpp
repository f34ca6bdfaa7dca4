#include "dlcda/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>

namespace dlcda {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failure on " + path);
  }
  return std::move(buf).str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Calls fn(line, line_number, byte_offset) for every line of text;
// a trailing newline does not produce an extra empty line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    fn(text.substr(pos, end - pos), line_no, pos);
    pos = end + 1;
  }
}

double parse_double(std::string_view token, const std::string& path,
                    std::size_t line, std::size_t byte_offset) {
  token = trim(token);
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw ParseError(path, line, byte_offset,
                     "expected a decimal number, got \"" + std::string(token) +
                         "\"");
  }
  return value;
}

Matrix load_features_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<double> store;
  std::size_t field_count = 0;
  std::size_t samples = 0;
  for_each_line(text, [&](std::string_view line, std::size_t line_no,
                          std::size_t offset) {
    if (trim(line).empty()) {
      throw ParseError(path, line_no, offset, "empty line");
    }
    std::size_t fields = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string_view token = line.substr(
          pos, comma == std::string_view::npos ? line.size() - pos
                                               : comma - pos);
      store.push_back(parse_double(token, path, line_no, offset + pos));
      ++fields;
      if (comma == std::string_view::npos) {
        break;
      }
      pos = comma + 1;
    }
    if (samples == 0) {
      field_count = fields;
    } else if (fields != field_count) {
      throw ParseError(path, line_no, offset,
                       "expected " + std::to_string(field_count) +
                           " fields, got " + std::to_string(fields));
    }
    ++samples;
  });
  if (samples == 0) {
    throw ParseError(path, 1, 0, "empty feature file");
  }
  // One sample per line; samples are stored as columns.
  Matrix X(static_cast<Index>(field_count), static_cast<Index>(samples));
  for (std::size_t j = 0; j < samples; ++j) {
    for (std::size_t i = 0; i < field_count; ++i) {
      X(static_cast<Index>(i), static_cast<Index>(j)) =
          store[j * field_count + i];
    }
  }
  return X;
}

constexpr char kMagic[4] = {'D', 'L', 'C', 'F'};

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::uint32_t v, std::ostream& out) {
  const unsigned char bytes[4] = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

Matrix load_features_binary(const std::string& path) {
  const std::string text = read_file(path);
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  if (text.size() < 12) {
    throw ParseError(path, 1, 0, "truncated header");
  }
  if (std::memcmp(text.data(), kMagic, 4) != 0) {
    throw ParseError(path, 1, 0, "bad magic, expected \"DLCF\"");
  }
  const std::uint32_t m = read_u32_le(bytes + 4);
  const std::uint32_t n = read_u32_le(bytes + 8);
  const std::uint64_t expected =
      12 + 8 * static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n);
  if (text.size() != expected) {
    throw ParseError(path, 1, 12,
                     "payload size mismatch: expected " +
                         std::to_string(expected) + " bytes, found " +
                         std::to_string(text.size()));
  }
  if (m == 0 || n == 0) {
    throw ParseError(path, 1, 4, "empty feature matrix");
  }
  Matrix X(static_cast<Index>(m), static_cast<Index>(n));
  static_assert(sizeof(double) == 8);
  // Payload is column-major float64, matching Eigen's default layout.
  std::memcpy(X.data(), text.data() + 12, text.size() - 12);
  return X;
}

}  // namespace

std::vector<int> load_labels(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<int> labels;
  for_each_line(text, [&](std::string_view line, std::size_t line_no,
                          std::size_t offset) {
    const std::string_view token = trim(line);
    if (token.empty()) {
      throw ParseError(path, line_no, offset, "empty line");
    }
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError(path, line_no, offset,
                       "expected an integer label, got \"" +
                           std::string(token) + "\"");
    }
    if (value < 1) {
      throw LabelOutOfRange(path + ":" + std::to_string(line_no) +
                            ": labels start at 1, got " +
                            std::to_string(value));
    }
    labels.push_back(value);
  });
  return labels;
}

Dataset load_features(const std::string& feature_path,
                      const std::optional<std::string>& label_path,
                      FeatureFormat format, DomainTag tag,
                      const std::string& name) {
  Dataset d;
  d.features = format == FeatureFormat::csv ? load_features_csv(feature_path)
                                            : load_features_binary(feature_path);
  require_finite(d.features, feature_path.c_str());
  d.domain_tag = tag;
  d.name = name.empty() ? feature_path : name;
  if (label_path) {
    auto labels = load_labels(*label_path);
    if (static_cast<Index>(labels.size()) != d.sample_count()) {
      throw LabelCountMismatch(*label_path + ": " +
                               std::to_string(labels.size()) + " labels for " +
                               std::to_string(d.sample_count()) + " samples");
    }
    d.labels = std::move(labels);
  }
  return d;
}

void save_features_binary(const Matrix& features, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out.write(kMagic, 4);
  write_u32_le(static_cast<std::uint32_t>(features.rows()), out);
  write_u32_le(static_cast<std::uint32_t>(features.cols()), out);
  out.write(reinterpret_cast<const char*>(features.data()),
            static_cast<std::streamsize>(sizeof(double) * features.size()));
  if (!out) {
    throw IoError("write failure on " + path);
  }
}

void save_features_csv(const Matrix& features, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  char buf[64];
  for (Index j = 0; j < features.cols(); ++j) {
    for (Index i = 0; i < features.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", features(i, j));
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failure on " + path);
  }
}

void save_labels(const std::vector<int>& labels, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  for (int v : labels) {
    out << v << '\n';
  }
  if (!out) {
    throw IoError("write failure on " + path);
  }
}

Dataset standardize(const Dataset& input) {
  if (input.sample_count() < 2) {
    throw DimensionMismatch("standardize needs at least 2 samples");
  }
  Dataset out = input;
  const double n = static_cast<double>(input.sample_count());
  for (Index i = 0; i < out.features.rows(); ++i) {
    auto row = out.features.row(i);
    const double mean = row.mean();
    row.array() -= mean;
    const double sd = std::sqrt(row.squaredNorm() / n);
    if (sd == 0.0) {
      row.setZero();
    } else {
      row /= sd;
    }
  }
  return out;
}

LabelMatrix encode_labels(const std::vector<int>& labels, int class_count,
                          int width) {
  if (labels.empty()) {
    throw LengthMismatch("encode_labels: empty label vector");
  }
  if (class_count < 1) {
    throw LabelOutOfRange("encode_labels: class_count must be >= 1");
  }
  if (width < class_count) {
    throw WidthTooSmall("encode_labels: width " + std::to_string(width) +
                        " < class count " + std::to_string(class_count));
  }
  LabelMatrix out;
  out.class_count = class_count;
  out.width = width;
  out.values = Matrix::Zero(static_cast<Index>(labels.size()), width);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int c = labels[i];
    if (c < 1 || c > class_count) {
      throw LabelOutOfRange("encode_labels: label " + std::to_string(c) +
                            " outside 1.." + std::to_string(class_count));
    }
    out.values(static_cast<Index>(i), c - 1) = 1.0;
  }
  return out;
}

std::vector<int> decode_labels(const Matrix& values, int class_count) {
  if (class_count < 1 || values.cols() < class_count) {
    throw DimensionMismatch("decode_labels: matrix has " +
                            std::to_string(values.cols()) +
                            " columns for class count " +
                            std::to_string(class_count));
  }
  std::vector<int> labels(static_cast<std::size_t>(values.rows()));
  for (Index i = 0; i < values.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < class_count; ++c) {
      if (values(i, c) > values(i, best)) {
        best = c;  // strict > keeps the smallest class on ties
      }
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
  }
  return labels;
}

int max_label(const std::vector<int>& labels) {
  if (labels.empty()) {
    throw LengthMismatch("max_label: empty label vector");
  }
  int best = 0;
  for (int v : labels) {
    if (v < 1) {
      throw LabelOutOfRange("labels start at 1, got " + std::to_string(v));
    }
    best = std::max(best, v);
  }
  return best;
}

}  // namespace dlcda
