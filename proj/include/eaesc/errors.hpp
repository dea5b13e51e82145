#pragma once

#include <stdexcept>
#include <string>

namespace eaesc {

// Every failure raised by the library carries a short kind tag so the
// command line front end can name it in reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define EAESC_ERROR(Name)                                                    \
    struct Name : Error {                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

EAESC_ERROR(ShapeMismatch);
EAESC_ERROR(DependentInput);
EAESC_ERROR(NotInvertible);
EAESC_ERROR(NotFredholm);
EAESC_ERROR(NotRepresentable);
EAESC_ERROR(BackendDisagreement);
EAESC_ERROR(BetaMismatch);
EAESC_ERROR(IndexObstruction);
EAESC_ERROR(ZeroIndexInput);
EAESC_ERROR(IndexMismatch);
EAESC_ERROR(NotEAE);
EAESC_ERROR(InternalCheckFailed);
EAESC_ERROR(UnknownAtom);
EAESC_ERROR(InconsistentFacts);
EAESC_ERROR(SchemaError);

#undef EAESC_ERROR

}  // namespace eaesc
