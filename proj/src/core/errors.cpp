#include "cloudstore/core/errors.hpp"

namespace cloudstore {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Alignment: return "alignment error";
    case ErrorKind::Unit: return "unit error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Infeasible: return "infeasibility error";
    }
    return "error";
}

}  // namespace cloudstore
