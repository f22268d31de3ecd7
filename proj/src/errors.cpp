#include "inoue/errors.hpp"

namespace inoue {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::ok: return "Ok";
    case ErrorCode::not_unimodular: return "NotUnimodular";
    case ErrorCode::wrong_spectrum: return "WrongSpectrum";
    case ErrorCode::not_hyperbolic: return "NotHyperbolic";
    case ErrorCode::zero_r: return "ZeroR";
    case ErrorCode::non_convergent: return "NonConvergent";
    case ErrorCode::singular_metric: return "SingularMetric";
    case ErrorCode::bad_kind: return "BadKind";
    case ErrorCode::not_strongly_flat: return "NotStronglyFlat";
    case ErrorCode::positivity_loss: return "PositivityLoss";
    case ErrorCode::step_failure: return "StepFailure";
    case ErrorCode::invalid_initial_data: return "InvalidInitialData";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::disconnected: return "Disconnected";
    case ErrorCode::schema_violation: return "SchemaViolation";
    case ErrorCode::missing_series: return "MissingSeries";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace inoue
