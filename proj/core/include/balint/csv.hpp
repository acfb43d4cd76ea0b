#pragma once

#include <string>
#include <string_view>

namespace balint {

/// RFC-4180 field: quoted when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

/// printf("%.*g") with `significant` digits; "nan"/"inf"/"-inf" for non-finite values.
std::string format_real(double value, int significant);

} // namespace balint
