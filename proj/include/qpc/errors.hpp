#pragma once

#include <stdexcept>
#include <string>

namespace qpc {

// One exception type per failure kind so callers can catch precisely.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define QPC_ERROR(Name)                                  \
    struct Name : Error {                                \
        explicit Name(const std::string& what)           \
            : Error(std::string(#Name ": ") + what) {}   \
    }

QPC_ERROR(DivisionByZero);
QPC_ERROR(NonMonomialFractionalPower);
QPC_ERROR(FractionalPowerOfNonMonomial);
QPC_ERROR(NonEvaluableRoot);
QPC_ERROR(DenominatorVanishes);
QPC_ERROR(UnboundGenerator);
QPC_ERROR(ParseError);
QPC_ERROR(ExponentOverflow);
QPC_ERROR(IndexOutOfRange);
QPC_ERROR(TooLarge);
QPC_ERROR(UnknownLabel);
QPC_ERROR(FrozenVertexMutation);
QPC_ERROR(NonCoreDenominator);
QPC_ERROR(IncompatiblePair);
QPC_ERROR(StructuralMismatch);
QPC_ERROR(BaseOnUnitCircle);
QPC_ERROR(PoleAtPoint);
QPC_ERROR(TruncationBudgetExceeded);
QPC_ERROR(DegeneratePolygon);
QPC_ERROR(SearchBudgetExceeded);
QPC_ERROR(UnknownCheck);
QPC_ERROR(ConfigError);

#undef QPC_ERROR

}  // namespace qpc
