#include "indra/io.hpp"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "indra/errors.hpp"
#include "indra/version.hpp"

namespace indra {

std::uint32_t crc32_bytes(const void* data, std::size_t len) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, static_cast<const Bytef*>(data), static_cast<uInt>(len)));
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot open \"" + path + "\" for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError("short write to \"" + path + "\"");
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int s = 0; s < 64; s += 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}
void put_string(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}
void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

// Cursor over a loaded file; every failure carries the byte offset.
class Reader {
 public:
  Reader(const std::string& buf, std::string path)
      : buf_(buf), path_(std::move(path)) {}

  std::size_t offset() const { return pos_; }

  const char* take(std::size_t n, const char* what) {
    if (pos_ + n > buf_.size()) {
      std::ostringstream msg;
      msg << path_ << ": truncated while reading " << what << " at byte offset "
          << pos_ << " (need " << n << " bytes, have " << buf_.size() - pos_ << ")";
      throw ParseError(msg.str());
    }
    const char* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }

  std::uint16_t u16(const char* what) {
    const auto* p = reinterpret_cast<const unsigned char*>(take(2, what));
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }
  std::uint32_t u32(const char* what) {
    const auto* p = reinterpret_cast<const unsigned char*>(take(4, what));
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
  }
  std::uint64_t u64(const char* what) {
    std::uint64_t v = 0;
    const auto* p = reinterpret_cast<const unsigned char*>(take(8, what));
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }
  std::string str(const char* what) {
    const std::uint32_t len = u32(what);
    return std::string(take(len, what), len);
  }
  bool exhausted() const { return pos_ == buf_.size(); }
  const std::string& path() const { return path_; }

 private:
  const std::string& buf_;
  std::string path_;
  std::size_t pos_ = 0;
};

struct Header {
  std::uint16_t flags = 0;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::vector<std::string> row_ids;
};

Header read_header(Reader& r) {
  const char* magic = r.take(4, "magic");
  if (std::memcmp(magic, kFormatMagic, 4) != 0)
    throw ParseError(r.path() + ": not an INDR file (bad magic)");
  const std::uint16_t version = r.u16("version");
  if (version != indr::kVersion) {
    std::ostringstream msg;
    msg << r.path() << ": unsupported format version " << version;
    throw ParseError(msg.str());
  }
  Header h;
  h.flags = r.u16("flags");
  h.n = r.u64("row count");
  h.m = r.u64("column count");
  constexpr std::uint64_t kSaneLimit = 1ull << 32;
  if (h.n == 0 || h.m == 0 || h.n > kSaneLimit || h.m > kSaneLimit ||
      h.n > kSaneLimit / h.m) {
    std::ostringstream msg;
    msg << r.path() << ": implausible shape " << h.n << "x" << h.m
        << " at byte offset " << r.offset();
    throw ParseError(msg.str());
  }
  h.row_ids.reserve(h.n);
  for (std::uint64_t i = 0; i < h.n; ++i) h.row_ids.push_back(r.str("row id"));
  return h;
}

Mat read_payload(Reader& r, std::uint64_t n, std::uint64_t m, bool f64) {
  const std::size_t width = f64 ? 8 : 4;
  const std::size_t bytes = static_cast<std::size_t>(n * m) * width;
  const std::size_t payload_offset = r.offset();
  const char* payload = r.take(bytes, "payload");
  const std::uint32_t expected = r.u32("payload checksum");
  const std::uint32_t actual = crc32_bytes(payload, bytes);
  if (actual != expected) {
    std::ostringstream msg;
    msg << r.path() << ": payload CRC mismatch (stored " << expected << ", computed "
        << actual << ", payload at byte offset " << payload_offset << ")";
    throw ChecksumMismatch(msg.str());
  }
  Mat out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  double* dst = out.data();
  const auto total = static_cast<std::size_t>(n * m);
  if (f64) {
    for (std::size_t i = 0; i < total; ++i) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, payload + i * 8, 8);
      dst[i] = std::bit_cast<double>(bits);
    }
  } else {
    for (std::size_t i = 0; i < total; ++i) {
      std::uint32_t bits = 0;
      std::memcpy(&bits, payload + i * 4, 4);
      dst[i] = static_cast<double>(std::bit_cast<float>(bits));
    }
  }
  return out;
}

bool looks_binary(const std::string& bytes) {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), kFormatMagic, 4) == 0;
}

EmbeddingSet parse_embeddings_csv(const std::string& text, const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> ids;
  std::size_t offset = 0;
  std::size_t line_no = 0;
  std::size_t dim = 0;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line.rfind("id", 0) != 0) {
        std::ostringstream msg;
        msg << path << ": expected \"id,...\" header at byte offset " << line_offset;
        throw ParseError(msg.str());
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 2) {
      std::ostringstream msg;
      msg << path << ": row with no values at byte offset " << line_offset;
      throw ParseError(msg.str());
    }
    if (dim == 0) dim = fields.size() - 1;
    if (fields.size() - 1 != dim) {
      std::ostringstream msg;
      msg << path << ": ragged row (" << fields.size() - 1 << " values, expected "
          << dim << ") at byte offset " << line_offset;
      throw ParseError(msg.str());
    }
    ids.push_back(fields[0]);
    std::vector<double> values(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const std::string& f = fields[j + 1];
      char* end = nullptr;
      values[j] = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || *end != '\0') {
        std::ostringstream msg;
        msg << path << ": bad number \"" << f << "\" at byte offset " << line_offset;
        throw ParseError(msg.str());
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");

  EmbeddingSet e;
  e.ids = std::move(ids);
  e.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j)
      e.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return e;
}

void require_csv_safe(const std::string& id) {
  if (id.find(',') != std::string::npos || id.find('\n') != std::string::npos)
    throw ParseError("id \"" + id + "\" contains a comma or newline; not CSV-safe");
}

}  // namespace

EmbeddingSet load_embeddings(const std::string& path) {
  const std::string bytes = read_file(path);
  EmbeddingSet e;
  if (looks_binary(bytes)) {
    Reader r(bytes, path);
    const Header h = read_header(r);
    if (h.flags & indr::kFlagMatrix)
      throw ParseError(path + ": contains a cost matrix, expected embeddings");
    if (h.flags & indr::kFlagColIds)
      throw ParseError(path + ": unexpected column id table in embedding file");
    if (h.flags & indr::kFlagMeta) e.provenance = r.str("provenance");
    e.ids = h.row_ids;
    e.data = read_payload(r, h.n, h.m, h.flags & indr::kFlagF64);
  } else {
    e = parse_embeddings_csv(bytes, path);
  }
  const ValidationReport report = validate_embeddings(e);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << path << ": invalid embeddings:";
    for (const auto& v : report.violations) msg << " [" << v.message << "]";
    throw ValidationError(msg.str());
  }
  return e;
}

void save_embeddings(const EmbeddingSet& e, const std::string& path) {
  std::string out;
  out.reserve(64 + e.size() * (e.dim() * 4 + 16));
  out.append(kFormatMagic, 4);
  put_u16(out, indr::kVersion);
  std::uint16_t flags = 0;  // f32 payload: embedding files stay 32-bit
  if (!e.provenance.empty()) flags |= indr::kFlagMeta;
  put_u16(out, flags);
  put_u64(out, e.size());
  put_u64(out, e.dim());
  for (const auto& id : e.ids) put_string(out, id);
  if (flags & indr::kFlagMeta) put_string(out, e.provenance);

  std::string payload;
  payload.reserve(e.size() * e.dim() * 4);
  const double* data = e.data.data();
  for (std::size_t i = 0; i < e.size() * e.dim(); ++i)
    put_f32(payload, static_cast<float>(data[i]));
  out += payload;
  put_u32(out, crc32_bytes(payload.data(), payload.size()));
  write_file(path, out);
}

void save_embeddings_csv(const EmbeddingSet& e, const std::string& path) {
  std::ostringstream out;
  out.precision(17);
  out << "id";
  for (std::size_t j = 0; j < e.dim(); ++j) out << ",x" << j;
  out << "\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    require_csv_safe(e.ids[i]);
    out << e.ids[i];
    for (std::size_t j = 0; j < e.dim(); ++j)
      out << "," << e.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    out << "\n";
  }
  write_file(path, std::move(out).str());
}

CostMatrix load_matrix(const std::string& path) {
  const std::string bytes = read_file(path);
  if (!looks_binary(bytes))
    throw ParseError(path + ": not an INDR file (bad magic)");
  Reader r(bytes, path);
  const Header h = read_header(r);
  if (!(h.flags & indr::kFlagMatrix))
    throw ParseError(path + ": contains embeddings, expected a cost matrix");

  CostMatrix m;
  m.row_ids = h.row_ids;
  m.anchored = h.flags & indr::kFlagAnchored;
  if (h.flags & indr::kFlagColIds) {
    m.col_ids.reserve(h.m);
    for (std::uint64_t j = 0; j < h.m; ++j) m.col_ids.push_back(r.str("col id"));
  } else {
    m.col_ids = m.row_ids;
  }
  if (h.flags & indr::kFlagMeta) {
    m.cost_kind = r.str("cost kind");
    const std::uint32_t steps = r.u32("op history count");
    m.op_history.reserve(steps);
    for (std::uint32_t s = 0; s < steps; ++s)
      m.op_history.push_back(r.str("op history step"));
  }
  m.values = read_payload(r, h.n, h.m, h.flags & indr::kFlagF64);
  if (m.col_ids.size() != m.cols()) {
    std::ostringstream msg;
    msg << path << ": column id count " << m.col_ids.size()
        << " does not match payload columns " << m.cols();
    throw ParseError(msg.str());
  }
  return m;
}

void save_matrix(const CostMatrix& m, const std::string& path) {
  std::string out;
  out.reserve(64 + m.rows() * (m.cols() * 8 + 16));
  out.append(kFormatMagic, 4);
  put_u16(out, indr::kVersion);
  // Matrices always carry f64 results, their own column ids and metadata.
  const std::uint16_t flags = indr::kFlagMatrix | indr::kFlagF64 |
                              indr::kFlagColIds | indr::kFlagMeta |
                              (m.anchored ? indr::kFlagAnchored : 0);
  put_u16(out, flags);
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (const auto& id : m.row_ids) put_string(out, id);
  for (const auto& id : m.col_ids) put_string(out, id);
  put_string(out, m.cost_kind);
  put_u32(out, static_cast<std::uint32_t>(m.op_history.size()));
  for (const auto& step : m.op_history) put_string(out, step);

  std::string payload;
  payload.reserve(m.rows() * m.cols() * 8);
  const double* data = m.values.data();
  for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) put_f64(payload, data[i]);
  out += payload;
  put_u32(out, crc32_bytes(payload.data(), payload.size()));
  write_file(path, out);
}

std::vector<int> load_labels_csv(const std::string& path,
                                 const std::vector<std::string>& ids) {
  const std::string text = read_file(path);
  std::unordered_map<std::string, int> by_id;
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("id", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      std::ostringstream msg;
      msg << path << ": expected \"id,label\" at byte offset " << line_offset;
      throw ParseError(msg.str());
    }
    const std::string id = line.substr(0, comma);
    const std::string label_str = line.substr(comma + 1);
    char* end = nullptr;
    const long label = std::strtol(label_str.c_str(), &end, 10);
    if (end == label_str.c_str() || *end != '\0' || label < 0) {
      std::ostringstream msg;
      msg << path << ": bad label \"" << label_str << "\" at byte offset "
          << line_offset;
      throw ParseError(msg.str());
    }
    by_id[id] = static_cast<int>(label);
  }
  std::vector<int> labels;
  labels.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end())
      throw ParseError(path + ": no label for id \"" + id + "\"");
    labels.push_back(it->second);
  }
  return labels;
}

void save_labels_csv(const std::vector<std::string>& ids,
                     const std::vector<int>& labels, const std::string& path) {
  if (ids.size() != labels.size())
    throw DimensionMismatch("id and label counts differ");
  std::ostringstream out;
  out << "id,label\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    require_csv_safe(ids[i]);
    out << ids[i] << "," << labels[i] << "\n";
  }
  write_file(path, std::move(out).str());
}

std::uint32_t file_crc32(const std::string& path) {
  const std::string bytes = read_file(path);
  return crc32_bytes(bytes.data(), bytes.size());
}

std::uint32_t payload_crc32(const std::string& path) {
  const std::string bytes = read_file(path);
  if (!looks_binary(bytes) || bytes.size() < 8)
    throw ParseError(path + ": not an INDR file");
  // The payload checksum is the trailing u32.
  const auto* p =
      reinterpret_cast<const unsigned char*>(bytes.data() + bytes.size() - 4);
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace indra
