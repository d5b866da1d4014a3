#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indra/types.hpp"

namespace indra {

// Binary interchange format ("INDR"), one container for embedding sets and
// cost matrices:
//
//   magic "INDR" | version u16 | flags u16 | n u64 | m u64
//   row id table: n x (u32 length + UTF-8 bytes)
//   [flag HAS_COL_IDS]  col id table: m x (u32 length + UTF-8 bytes)
//   [flag HAS_META]     embeddings: provenance string
//                       matrices:   cost_kind string + op_history list
//   payload: n*m little-endian floats, row-major (f32, or f64 if flag F64)
//   crc32 (u32) of the payload bytes
//
// Exporters dumping encoder outputs write the minimal form: flags = 0,
// f32 payload, no extra sections. Integers little-endian throughout.
//
// Embedding files carry f32 (flag F64 clear) and are widened to double on
// load; matrix files carry the full f64 results.

namespace indr {
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::uint16_t kFlagF64 = 1u << 0;
inline constexpr std::uint16_t kFlagAnchored = 1u << 1;
inline constexpr std::uint16_t kFlagColIds = 1u << 2;
inline constexpr std::uint16_t kFlagMeta = 1u << 3;
inline constexpr std::uint16_t kFlagMatrix = 1u << 4;
}  // namespace indr

// Loads CSV ("id,x0,x1,..." header) or binary INDR, sniffed by magic.
// Throws ParseError (with byte offset) / ValidationError.
EmbeddingSet load_embeddings(const std::string& path);

void save_embeddings(const EmbeddingSet& e, const std::string& path);
void save_embeddings_csv(const EmbeddingSet& e, const std::string& path);

// Lossless round-trip of values, ids, anchored flag, cost_kind and operator
// history. Throws ParseError / ChecksumMismatch.
CostMatrix load_matrix(const std::string& path);
void save_matrix(const CostMatrix& m, const std::string& path);

// Labels CSV: "id,label" header; rows matched to `ids` (every id present).
std::vector<int> load_labels_csv(const std::string& path,
                                 const std::vector<std::string>& ids);
void save_labels_csv(const std::vector<std::string>& ids,
                     const std::vector<int>& labels, const std::string& path);

// CRC-32 (IEEE) helpers; file_crc32 hashes the whole file, payload_crc32
// returns the payload checksum stored in an INDR file.
std::uint32_t crc32_bytes(const void* data, std::size_t len);
std::uint32_t file_crc32(const std::string& path);
std::uint32_t payload_crc32(const std::string& path);

}  // namespace indra
