#pragma once

#include <stdexcept>
#include <string>

namespace indra {

// Base for every recoverable error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define INDRA_DECLARE_ERROR(NAME)     \
  class NAME : public Error {         \
   public:                            \
    using Error::Error;               \
  };

INDRA_DECLARE_ERROR(DimensionMismatch)
INDRA_DECLARE_ERROR(ZeroNormInput)
INDRA_DECLARE_ERROR(UnknownAnchorId)
INDRA_DECLARE_ERROR(KOutOfRange)
INDRA_DECLARE_ERROR(DegenerateRow)
INDRA_DECLARE_ERROR(NotSquare)
INDRA_DECLARE_ERROR(IndexOutOfRange)
INDRA_DECLARE_ERROR(ColumnMismatch)
INDRA_DECLARE_ERROR(NonFiniteRow)
INDRA_DECLARE_ERROR(SingleClassData)
INDRA_DECLARE_ERROR(NonFiniteFeature)
INDRA_DECLARE_ERROR(EmptySplit)
INDRA_DECLARE_ERROR(ParseError)
INDRA_DECLARE_ERROR(ChecksumMismatch)
INDRA_DECLARE_ERROR(ValidationError)
INDRA_DECLARE_ERROR(MatrixTooLarge)

#undef INDRA_DECLARE_ERROR

}  // namespace indra
