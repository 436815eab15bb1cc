#pragma once

#include <iosfwd>
#include <string_view>

#include "panelprobit/panel.hpp"
#include "panelprobit/runs_t3.hpp"

namespace panelprobit {

/// Long-format panel: header `id,t,d[,x1,...,xk]`, one row per individual and
/// wave. Waves of every individual must be exactly 1..T with T in {2, 3}.
/// Individuals keep their order of first appearance.
/// Throws Error(SchemaError | NonBinaryOutcome | RaggedPanel | DuplicateRow).
PanelData parse_panel_csv(std::istream& in);

/// Inverse of parse_panel_csv; numbers are written in shortest round-trip form.
void write_panel_csv(std::ostream& out, const PanelData& panel);

/// `pattern,count` rows for the eight T = 3 patterns; missing patterns count as zero.
RunsCounts parse_runs_csv(std::istream& in);

/// Eight comma-separated counts in the order n000,n001,n010,n100,n110,n011,n101,n111.
RunsCounts parse_runs_list(std::string_view text);

}  // namespace panelprobit
