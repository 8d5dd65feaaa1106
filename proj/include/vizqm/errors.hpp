#pragma once

#include <stdexcept>
#include <string>

namespace vizqm {

enum class Errc {
    file_not_found,
    decode_error,
    corrupt_record,
    duplicate_id,
    unknown_metric,
    schema_error,
    missing_objective,
    mark_out_of_range,
    incomplete_bundle,
    missing_matrix_data,
    missing_wave_data,
    invalid_argument,
    io_error,
};

const char* errc_name(Errc c);

/// Library-wide exception. `code()` identifies the failure class so the CLI
/// can map validation errors to exit code 1 and everything else to 2.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const noexcept { return code_; }

    /// True for errors caused by bad user input rather than internal faults.
    bool is_input_error() const noexcept {
        switch (code_) {
        case Errc::file_not_found:
        case Errc::decode_error:
        case Errc::corrupt_record:
        case Errc::duplicate_id:
        case Errc::unknown_metric:
        case Errc::schema_error:
        case Errc::missing_objective:
        case Errc::mark_out_of_range:
        case Errc::incomplete_bundle:
        case Errc::invalid_argument:
            return true;
        default:
            return false;
        }
    }

private:
    Errc code_;
};

[[noreturn]] inline void throw_error(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace vizqm
