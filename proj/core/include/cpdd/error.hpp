#pragma once

#include <stdexcept>
#include <string>

namespace cpdd {

enum class ErrorCode {
    medial_axis_point,
    off_surface,
    empty_mesh,
    bad_mesh_record,
    tube_too_wide,
    stencil_incomplete,
    seed_off_tube,
    dimension_mismatch,
    singular_matrix,
    breakdown,
    too_many_parts,
    label_out_of_range,
    wrong_length,
    empty_subdomain,
    overlap_exceeds_domain,
    stencil_escapes_subdomain,
    singular_local,
    singular_block,
    invalid_config,
    io_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::medial_axis_point: return "MedialAxisPoint";
        case ErrorCode::off_surface: return "OffSurface";
        case ErrorCode::empty_mesh: return "EmptyMesh";
        case ErrorCode::bad_mesh_record: return "BadMeshRecord";
        case ErrorCode::tube_too_wide: return "TubeTooWide";
        case ErrorCode::stencil_incomplete: return "StencilIncomplete";
        case ErrorCode::seed_off_tube: return "SeedOffTube";
        case ErrorCode::dimension_mismatch: return "DimensionMismatch";
        case ErrorCode::singular_matrix: return "SingularMatrix";
        case ErrorCode::breakdown: return "Breakdown";
        case ErrorCode::too_many_parts: return "TooManyParts";
        case ErrorCode::label_out_of_range: return "LabelOutOfRange";
        case ErrorCode::wrong_length: return "WrongLength";
        case ErrorCode::empty_subdomain: return "EmptySubdomain";
        case ErrorCode::overlap_exceeds_domain: return "OverlapExceedsDomain";
        case ErrorCode::stencil_escapes_subdomain: return "StencilEscapesSubdomain";
        case ErrorCode::singular_local: return "SingularLocal";
        case ErrorCode::singular_block: return "SingularBlock";
        case ErrorCode::invalid_config: return "InvalidConfig";
        case ErrorCode::io_error: return "IoError";
    }
    return "UnknownError";
}

}  // namespace cpdd
