#pragma once

#include "selfaffine/connect.hpp"
#include "selfaffine/params.hpp"
#include "selfaffine/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace selfaffine::cli {

/* Shared run parameters.  Sources in increasing precedence: built-in
   defaults, a flat key/value config file, command-line flags. */
struct RunConfig {
    long long depth = 12;
    long long point_budget = 1'000'000;
    long long raster_size = 512;
    long long jobs = 1;
    std::string output_dir = ".";
};

// Throws invalid_input naming the first non-positive field.
void require_valid(const RunConfig& config);

/* Parses "key = value" lines over the existing config; blank lines and
   lines starting with '#' are skipped.  Unknown keys and malformed values
   are rejected by name. */
RunConfig load_config_file(const std::string& path, RunConfig base = {});

inline constexpr const char* config_env_var = "SELFAFFINE_CONFIG";

// Defaults, overlaid with the file named by SELFAFFINE_CONFIG when set.
RunConfig environment_config();

/* Exact argument parsing with errors named after the offending field:
   "3/2", "-7" and terminating decimals like "0.25" are accepted, anything
   else is rejected. */
Rat parse_rational_field(const std::string& text, const std::string& field);
long long parse_integer_field(const std::string& text, const std::string& field);

/* Ordered key/value record, one "key=value" line per field.  Values may
   contain anything except newlines; parsing splits at the first '='. */
struct Record {
    std::vector<std::pair<std::string, std::string>> fields;

    void add(std::string key, std::string value);
    void add(std::string key, const char* value);
    void add(std::string key, const Rat& value);
    void add(std::string key, bool value);
    void add(std::string key, long long value);
    const std::string* find(const std::string& key) const;
};

std::string write_record(const Record& record);
Record parse_record(const std::string& text);

/* CSV with one header row.  Cells must not contain commas, quotes or
   newlines; the writer rejects offenders instead of quoting them. */
std::string write_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

struct SweepRequest {
    long long p = 2;
    long long q = 2;
    long long m = 2;
    long long n = 2;
    Rat a_min = 0;
    Rat a_max = 0;
    long long steps = 1;
};

struct SweepRow {
    Rat a;
    connectivity::ConnectVerdict verdict;
    bool in_outer_band = false;
    bool in_inner_band = false;
};

struct SweepResult {
    SweepRequest request;
    std::vector<SweepRow> rows;
};

/* Evaluates the closed-form decision on the exact grid
   a_i = a_min + i*(a_max - a_min)/(steps - 1); steps = 1 yields a_min
   alone.  Workers share an index counter, so the output is identical for
   every job count. */
SweepResult run_sweep(const SweepRequest& request, long long jobs = 1);

// columns: a, verdict, branch, in_outer_band, in_inner_band
std::string sweep_csv(const SweepResult& result);

struct SweepCsvRow {
    Rat a;
    std::string verdict;
    std::string branch;
    bool in_outer_band = false;
    bool in_inner_band = false;
};

// Inverse of sweep_csv; reconstructs the grid values exactly.
std::vector<SweepCsvRow> parse_sweep_csv(const std::string& text);

/* Binary P5 strip, one column per grid point, rows_tall rows: white for
   Connected, black for Disconnected, mid gray for OutOfScope. */
std::string phase_strip(const SweepResult& result, long long rows_tall = 16);

// Echoes the parameters, verdict, branch, bands and hypothesis notes.
Record decide_record(const AffinePair& pair);

/* Closed form, sequence oracle and geometric graph side by side.  The
   oracle and the five per-case attainability checks report "unavailable"
   where their hypotheses fail; agreement keys appear only when both sides
   reached a definite verdict. */
Record verify_record(const AffinePair& pair, long long depth, long long node_budget = 2'000'000);

// Keys M1, m1, M2, M1p, m1p, M2p with depth-limited enclosures.
Record extremes_record(long long p, long long q, long long m, long long depth);

// Neighbor predicates plus the labeled piece graph at the given depth.
Record adjacency_record(const AffinePair& pair, long long depth,
                        long long node_budget = 4'000'000);

// Classification, collision witness and both probes up to level k_max.
Record tile_record(const AffinePair& pair, long long k_max,
                   long long point_budget = 1'000'000);

} // namespace selfaffine::cli
