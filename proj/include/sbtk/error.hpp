#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sbtk {

// Input data that violates a format or a domain precondition. The CLI maps
// these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result failed one of its own invariants. Exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

#define SBTK_DATA_ERROR(Name)                          \
  class Name : public DataError {                      \
   public:                                             \
    explicit Name(const std::string& what)             \
        : DataError(std::string(#Name ": ") + what) {} \
  }

// graph_core
SBTK_DATA_ERROR(ParseError);
SBTK_DATA_ERROR(DuplicateEdge);
SBTK_DATA_ERROR(SelfLoop);
SBTK_DATA_ERROR(NonPositiveWeight);
SBTK_DATA_ERROR(NotSymmetric);
SBTK_DATA_ERROR(NotSquare);
SBTK_DATA_ERROR(UnorderedTicks);

// clique_filtration / persistence
SBTK_DATA_ERROR(EmptyGraph);
SBTK_DATA_ERROR(InvalidComplex);

// pea_extract
SBTK_DATA_ERROR(SeriesTooShort);
SBTK_DATA_ERROR(InitialNotSteady);
SBTK_DATA_ERROR(NoPlateaus);
SBTK_DATA_ERROR(UnknownState);

// hda_chu
SBTK_DATA_ERROR(NoGenerators);
SBTK_DATA_ERROR(LabelClash);
SBTK_DATA_ERROR(StateSpaceTooLarge);

// immune_sim
SBTK_DATA_ERROR(WidthMismatch);
SBTK_DATA_ERROR(DimensionMismatch);
SBTK_DATA_ERROR(ZeroTotalVolume);
SBTK_DATA_ERROR(ConfigError);

#undef SBTK_DATA_ERROR

// Raised by persistent_entropy on a barcode without positive-length bars.
// The chronogram re-raises it with the tick of the offending observation.
class EmptyBarcode : public DataError {
 public:
  explicit EmptyBarcode(std::optional<std::uint64_t> tick = std::nullopt)
      : DataError(tick ? "EmptyBarcode: no bars at tick " + std::to_string(*tick)
                       : std::string("EmptyBarcode: no bars")),
        tick_(tick) {}

  std::optional<std::uint64_t> tick() const { return tick_; }

 private:
  std::optional<std::uint64_t> tick_;
};

}  // namespace sbtk
