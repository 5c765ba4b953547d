#include "selfaffine/cli_io.hpp"

#include "selfaffine/extremal.hpp"
#include "selfaffine/geometry.hpp"
#include "selfaffine/tiling.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace selfaffine::cli {

namespace {

std::string trim(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    std::size_t last = text.find_last_not_of(" \t");
    return text.substr(first, last - first + 1);
}

long long to_long_long(const Rat& value, const std::string& what) {
    if (!is_integer(value))
        throw invalid_input(what + ": not an integer: '" + format_rational(value) + "'");
    Int num = numerator(value);
    if (num > Int(std::numeric_limits<long long>::max()) ||
        num < Int(std::numeric_limits<long long>::min()))
        throw invalid_input(what + ": out of range: '" + format_rational(value) + "'");
    return num.convert_to<long long>();
}

long long parse_config_integer(const std::string& value, const std::string& key) {
    Rat parsed;
    try {
        parsed = parse_rational(value);
    } catch (const invalid_input&) {
        throw invalid_input("config: key '" + key + "' needs an integer, got '" + value + "'");
    }
    return to_long_long(parsed, "config: key '" + key + "'");
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

std::string bool_text(bool value) { return value ? "true" : "false"; }

bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw invalid_input(what + ": expected true or false, got '" + text + "'");
}

std::string join_digits(const std::vector<long long>& digits) {
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += std::to_string(digits[i]);
    }
    return out;
}

void add_band(Record& record, const std::string& name,
              const std::optional<RationalInterval>& band) {
    if (!band) return;
    record.add(name + "_lo", band->lo);
    record.add(name + "_hi", band->hi);
}

void add_enclosure(Record& record, const std::string& name, const RationalInterval& enclosure) {
    record.add(name + "_enclosure_lo", enclosure.lo);
    record.add(name + "_enclosure_hi", enclosure.hi);
}

void echo_pair(Record& record, const AffinePair& pair) {
    record.add("p", pair.p);
    record.add("q", pair.q);
    record.add("a", pair.a);
    record.add("m", pair.m);
    record.add("n", pair.n);
}

} // namespace

void require_valid(const RunConfig& config) {
    if (config.depth < 1) throw invalid_input("config: depth must be positive");
    if (config.point_budget < 1) throw invalid_input("config: point_budget must be positive");
    if (config.raster_size < 1) throw invalid_input("config: raster_size must be positive");
    if (config.jobs < 1) throw invalid_input("config: jobs must be positive");
    if (config.output_dir.empty()) throw invalid_input("config: output_dir must be nonempty");
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw invalid_input("config: cannot read '" + path + "'");
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw invalid_input("config: expected key=value at line " + std::to_string(line_no));
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key == "depth") {
            base.depth = parse_config_integer(value, key);
        } else if (key == "point_budget") {
            base.point_budget = parse_config_integer(value, key);
        } else if (key == "raster_size") {
            base.raster_size = parse_config_integer(value, key);
        } else if (key == "jobs") {
            base.jobs = parse_config_integer(value, key);
        } else if (key == "output_dir") {
            base.output_dir = value;
        } else {
            throw invalid_input("config: unknown key '" + key + "'");
        }
    }
    require_valid(base);
    return base;
}

RunConfig environment_config() {
    RunConfig config;
    const char* path = std::getenv(config_env_var);
    if (path != nullptr && *path != '\0') config = load_config_file(path, config);
    return config;
}

Rat parse_rational_field(const std::string& text, const std::string& field) {
    try {
        return parse_rational(text);
    } catch (const invalid_input& error) {
        throw invalid_input(field + ": " + error.what());
    }
}

long long parse_integer_field(const std::string& text, const std::string& field) {
    return to_long_long(parse_rational_field(text, field), field);
}

void Record::add(std::string key, std::string value) {
    fields.emplace_back(std::move(key), std::move(value));
}

void Record::add(std::string key, const char* value) {
    fields.emplace_back(std::move(key), std::string(value));
}

void Record::add(std::string key, const Rat& value) {
    fields.emplace_back(std::move(key), format_rational(value));
}

void Record::add(std::string key, bool value) {
    fields.emplace_back(std::move(key), bool_text(value));
}

void Record::add(std::string key, long long value) {
    fields.emplace_back(std::move(key), std::to_string(value));
}

const std::string* Record::find(const std::string& key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return &v;
    return nullptr;
}

std::string write_record(const Record& record) {
    std::string out;
    for (const auto& [key, value] : record.fields) {
        out += key;
        out.push_back('=');
        out += value;
        out.push_back('\n');
    }
    return out;
}

Record parse_record(const std::string& text) {
    Record record;
    for (const std::string& line : split_lines(text)) {
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_input("record: expected key=value, got '" + line + "'");
        record.add(line.substr(0, eq), line.substr(eq + 1));
    }
    return record;
}

namespace {

void check_csv_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") != std::string::npos)
        throw invalid_input("csv: cell contains a delimiter: '" + cell + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    cells.push_back(current);
    return cells;
}

} // namespace

std::string write_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    if (header.empty()) throw invalid_input("csv: header must be nonempty");
    std::string out;
    auto append_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            check_csv_cell(cells[i]);
            if (i > 0) out.push_back(',');
            out += cells[i];
        }
        out.push_back('\n');
    };
    append_row(header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw invalid_input("csv: row width " + std::to_string(row.size()) +
                                " does not match header width " + std::to_string(header.size()));
        append_row(row);
    }
    return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    for (const std::string& line : split_lines(text)) {
        rows.push_back(split_csv_line(line));
        if (rows.back().size() != rows.front().size())
            throw invalid_input("csv: ragged row '" + line + "'");
    }
    if (rows.empty()) throw invalid_input("csv: empty input");
    return rows;
}

SweepResult run_sweep(const SweepRequest& request, long long jobs) {
    if (request.steps < 1) throw invalid_input("sweep: steps must be positive");
    if (jobs < 1) throw invalid_input("sweep: jobs must be positive");
    require_valid(AffinePair{request.p, request.q, request.a_min, request.m, request.n});

    SweepResult result;
    result.request = request;
    result.rows.resize(static_cast<std::size_t>(request.steps));

    Rat span = request.a_max - request.a_min;
    auto compute = [&](long long index) {
        Rat a = request.a_min;
        if (request.steps > 1) a += Rat(index) * span / Rat(request.steps - 1);
        SweepRow row;
        row.a = a;
        row.verdict = connectivity::decide_any(AffinePair{request.p, request.q, a, request.m, request.n});
        Rat magnitude = a < 0 ? Rat(-a) : a;
        row.in_outer_band = row.verdict.outer_band && row.verdict.outer_band->contains(magnitude);
        row.in_inner_band = row.verdict.inner_band && row.verdict.inner_band->contains(magnitude);
        result.rows[static_cast<std::size_t>(index)] = std::move(row);
    };

    long long workers = std::min(jobs, request.steps);
    if (workers <= 1) {
        for (long long i = 0; i < request.steps; ++i) compute(i);
        return result;
    }

    std::atomic<long long> next{0};
    std::mutex failure_lock;
    std::exception_ptr failure;
    auto body = [&] {
        try {
            for (long long i = next.fetch_add(1); i < request.steps; i = next.fetch_add(1))
                compute(i);
        } catch (...) {
            std::lock_guard<std::mutex> guard(failure_lock);
            if (!failure) failure = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long long w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(result.rows.size());
    for (const SweepRow& row : result.rows) {
        rows.push_back({format_rational(row.a), connectivity::to_string(row.verdict.status),
                        connectivity::to_string(row.verdict.branch), bool_text(row.in_outer_band),
                        bool_text(row.in_inner_band)});
    }
    return write_csv({"a", "verdict", "branch", "in_outer_band", "in_inner_band"}, rows);
}

std::vector<SweepCsvRow> parse_sweep_csv(const std::string& text) {
    std::vector<std::vector<std::string>> table = parse_csv(text);
    const std::vector<std::string> expected{"a", "verdict", "branch", "in_outer_band",
                                            "in_inner_band"};
    if (table.front() != expected) throw invalid_input("sweep csv: unexpected header");
    std::vector<SweepCsvRow> rows;
    rows.reserve(table.size() - 1);
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& cells = table[i];
        SweepCsvRow row;
        row.a = parse_rational(cells[0]);
        row.verdict = cells[1];
        row.branch = cells[2];
        row.in_outer_band = parse_bool(cells[3], "sweep csv: in_outer_band");
        row.in_inner_band = parse_bool(cells[4], "sweep csv: in_inner_band");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string phase_strip(const SweepResult& result, long long rows_tall) {
    if (rows_tall < 1) throw invalid_input("phase strip: height must be positive");
    if (result.rows.empty()) throw invalid_input("phase strip: empty sweep");
    std::string image = "P5\n" + std::to_string(result.rows.size()) + " " +
                        std::to_string(rows_tall) + "\n255\n";
    std::string scanline;
    scanline.reserve(result.rows.size());
    for (const SweepRow& row : result.rows) {
        char gray = '\x80';
        if (row.verdict.status == connectivity::ConnectStatus::Connected) gray = '\xff';
        if (row.verdict.status == connectivity::ConnectStatus::Disconnected) gray = '\x00';
        scanline.push_back(gray);
    }
    for (long long r = 0; r < rows_tall; ++r) image += scanline;
    return image;
}

Record decide_record(const AffinePair& pair) {
    connectivity::ConnectVerdict verdict = connectivity::decide_any(pair);
    Record record;
    echo_pair(record, pair);
    record.add("verdict", connectivity::to_string(verdict.status));
    record.add("branch", connectivity::to_string(verdict.branch));
    if (!verdict.satisfied_inequality.empty())
        record.add("inequality", verdict.satisfied_inequality);
    record.add("band_hypotheses", verdict.hypotheses.band_hypotheses_ok);
    record.add("standard_digits", verdict.hypotheses.standard_digits_ok);
    record.add("tile_dimensions", verdict.hypotheses.tile_dimensions_ok);
    add_band(record, "outer_band", verdict.outer_band);
    add_band(record, "inner_band", verdict.inner_band);
    for (const std::string& message : verdict.hypotheses.messages) record.add("note", message);
    return record;
}

Record verify_record(const AffinePair& pair, long long depth, long long node_budget) {
    AffinePair normalized = normalize_sign(pair);
    Record record;
    echo_pair(record, pair);
    record.add("depth", depth);

    connectivity::ConnectVerdict formula = connectivity::decide_any(pair);
    record.add("formula", connectivity::to_string(formula.status));
    record.add("formula_branch", connectivity::to_string(formula.branch));

    std::optional<connectivity::OracleStatus> oracle_status;
    try {
        connectivity::OracleDecision oracle = connectivity::oracle_decide(normalized, depth, node_budget);
        record.add("oracle", connectivity::to_string(oracle.status));
        record.add("oracle_depth_used", oracle.depth_used);
        oracle_status = oracle.status;
    } catch (const invalid_input& error) {
        record.add("oracle", "unavailable");
        record.add("oracle_note", error.what());
    }

    geometry::AdjacencyGraph graph = geometry::adjacency_graph(normalized, depth);
    bool graph_connected = geometry::graph_connected(graph);
    record.add("graph", graph_connected ? "connected" : "disconnected");
    record.add("graph_certified", !graph_connected);

    bool formula_definite = formula.status != connectivity::ConnectStatus::OutOfScope;
    bool formula_connected = formula.status == connectivity::ConnectStatus::Connected;
    if (formula_definite && oracle_status && *oracle_status != connectivity::OracleStatus::Unknown)
        record.add("formula_matches_oracle",
                   formula_connected == (*oracle_status == connectivity::OracleStatus::Connected));
    if (formula_definite) record.add("formula_matches_graph", formula_connected == graph_connected);
    if (oracle_status && *oracle_status != connectivity::OracleStatus::Unknown)
        record.add("oracle_matches_graph",
                   (*oracle_status == connectivity::OracleStatus::Connected) == graph_connected);

    for (connectivity::IntersectionCase which :
         {connectivity::IntersectionCase::SameColumn,
          connectivity::IntersectionCase::NextColumnSameRow,
          connectivity::IntersectionCase::NextColumnNextRow,
          connectivity::IntersectionCase::NextColumnPrevRow,
          connectivity::IntersectionCase::ColumnCrossing}) {
        std::string key = connectivity::to_string(which);
        try {
            connectivity::IntersectionCondition condition =
                connectivity::intersection_condition_interval(normalized, which);
            extremal::AttainabilityResult answer = extremal::attainable(
                condition.space, condition.functional, condition.target, depth, node_budget);
            record.add(key, extremal::to_string(answer.status));
            if (answer.witness) record.add(key + "_witness", answer.witness->render());
            if (answer.witness_value) record.add(key + "_value", *answer.witness_value);
            if (!answer.note.empty()) record.add(key + "_note", answer.note);
        } catch (const invalid_input& error) {
            record.add(key, "unavailable");
            record.add(key + "_note", error.what());
        }
    }
    return record;
}

Record extremes_record(long long p, long long q, long long m, long long depth) {
    extremal::ExtremesReport report = extremal::extremes_report(p, q, m, depth);
    Record record;
    record.add("p", p);
    record.add("q", q);
    record.add("m", m);
    record.add("depth", depth);
    record.add("M1", report.geometric_sum_one.max_value);
    record.add("m1", report.geometric_sum_one.min_value);
    record.add("M2", report.geometric_sum_zero.max_value);
    record.add("M1p", report.weighted_sum_one.max_value);
    record.add("m1p", report.weighted_sum_one.min_value);
    record.add("M2p", report.weighted_sum_zero.max_value);
    add_enclosure(record, "M1", report.geometric_sum_one_enclosure.max_enclosure);
    add_enclosure(record, "m1", report.geometric_sum_one_enclosure.min_enclosure);
    add_enclosure(record, "M2", report.geometric_sum_zero_enclosure.max_enclosure);
    add_enclosure(record, "M1p", report.weighted_sum_one_enclosure.max_enclosure);
    add_enclosure(record, "m1p", report.weighted_sum_one_enclosure.min_enclosure);
    add_enclosure(record, "M2p", report.weighted_sum_zero_enclosure.max_enclosure);
    return record;
}

Record adjacency_record(const AffinePair& pair, long long depth, long long node_budget) {
    AffinePair normalized = normalize_sign(pair);
    Record record;
    echo_pair(record, pair);
    record.add("depth", depth);

    connectivity::AdjacencyMatrix matrix =
        connectivity::adjacency_predicates(normalized, depth, node_budget);
    record.add("column", matrix.column);
    record.add("horizontal", extremal::to_string(matrix.horizontal));
    record.add("vertical", extremal::to_string(matrix.vertical));
    record.add("diag_up", extremal::to_string(matrix.diag_up));
    record.add("diag_down", extremal::to_string(matrix.diag_down));
    record.add("predicate_depth_used", matrix.depth_used);

    geometry::AdjacencyGraph graph = geometry::adjacency_graph(normalized, depth, node_budget);
    record.add("nodes", static_cast<long long>(graph.node_count()));
    record.add("edges", static_cast<long long>(graph.edges.size()));
    for (const auto& edge : graph.edges) {
        long long n = graph.n;
        auto name = [n](std::size_t index) {
            long long i = static_cast<long long>(index) / n;
            long long j = static_cast<long long>(index) % n;
            return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
        };
        record.add("edge." + name(edge.u) + "-" + name(edge.v), geometry::to_string(edge.label));
    }
    record.add("connected", geometry::graph_connected(graph));
    return record;
}

Record tile_record(const AffinePair& pair, long long k_max, long long point_budget) {
    if (k_max < 1) throw invalid_input("tile: k_max must be positive");
    tiling::TileVerdict verdict = tiling::classify_tile(pair, point_budget);
    Record record;
    echo_pair(record, pair);
    record.add("status", tiling::to_string(verdict.status));
    record.add("case", tiling::to_string(verdict.tile_case));
    if (verdict.witness) {
        record.add("witness_level", verdict.witness->level);
        record.add("witness_first_x", join_digits(verdict.witness->first.x));
        record.add("witness_first_y", join_digits(verdict.witness->first.y));
        record.add("witness_second_x", join_digits(verdict.witness->second.x));
        record.add("witness_second_y", join_digits(verdict.witness->second.y));
        tiling::TilePoint image = tiling::digit_word_image(pair, verdict.witness->first);
        record.add("witness_image_x", image.first);
        record.add("witness_image_y", image.second);
    }

    tiling::CardinalityProbe cardinality = tiling::cardinality_probe(pair, k_max, point_budget);
    record.add("cardinality", tiling::to_string(cardinality.status));
    for (const auto& level : cardinality.levels)
        record.add("cardinality_level_" + std::to_string(level.k),
                   std::to_string(level.count) + "/" + std::to_string(level.expected));
    if (cardinality.witness) record.add("cardinality_witness_level", cardinality.witness->level);
    if (!cardinality.note.empty()) record.add("cardinality_note", cardinality.note);

    try {
        std::vector<tiling::DiscretenessLevel> levels =
            tiling::discreteness_probe(pair, k_max, point_budget);
        for (const auto& level : levels)
            record.add("discreteness_level_" + std::to_string(level.k), level.min_distance);
    } catch (const budget_exceeded& error) {
        record.add("discreteness", "unavailable");
        record.add("discreteness_note", error.what());
    }
    return record;
}

} // namespace selfaffine::cli
