/*
 * Copyright 2026 The symbound Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "symbound/abstraction.hpp"
#include "symbound/abstraction_io.hpp"
#include "symbound/ctmdp.hpp"
#include "symbound/errors.hpp"
#include "symbound/explicit_engine.hpp"
#include "symbound/parser.hpp"
#include "symbound/partition.hpp"
#include "symbound/semantics.hpp"
#include "symbound/symbolic.hpp"
#include "symbound/value_iteration.hpp"

namespace symbound::cli {

namespace {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string model_path;
    double time = 1.0;
    double epsilon = 1e-6;
    std::string direction = "both";
    std::size_t refine_iters = 0;
    std::string predicates_path;
    std::optional<double> lambda;
    std::size_t state_cap = model::kDefaultStateCap;
    std::string target;
    std::string phases;
    std::string json_path;
    std::string dump_abstraction;
    std::string abstraction_path;
    std::string export_partition;
    std::string dump_matrix;
    std::vector<std::string> constants;
    bool kahan = false;
    bool per_block = false;
    unsigned workers = 1;
    std::size_t initial_state = 0;

    std::ostream* err = nullptr;
    // compare builds both pipelines; warn once
    mutable bool deadlocks_reported = false;
};

void warn_deadlocks(const RunConfig& cfg, double count) {
    if (count <= 0.0 || cfg.deadlocks_reported || !cfg.err) return;
    cfg.deadlocks_reported = true;
    *cfg.err << "warning: " << count << " reachable state(s) have no enabled command and are absorbing\n";
}

class Stopwatch {
   public:
    double lap() {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

   private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

void validate(const RunConfig& cfg) {
    if (!(cfg.time >= 0.0) || !std::isfinite(cfg.time)) throw UsageError("--time must be >= 0");
    if (!(cfg.epsilon > 0.0)) throw UsageError("--epsilon must be > 0");
    if (cfg.lambda && !(*cfg.lambda > 0.0)) throw UsageError("--lambda must be > 0");
    if (cfg.workers == 0) throw UsageError("--workers must be >= 1");
}

std::vector<double> horizons(const RunConfig& cfg) {
    if (cfg.phases.empty()) return {cfg.time};
    std::vector<double> out;
    std::stringstream in(cfg.phases);
    for (std::string item; std::getline(in, item, ',');) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size() || !(v >= 0.0)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("--phases expects non-negative numbers separated by commas, got '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("--phases is empty");
    return out;
}

std::vector<vi::Direction> directions(const std::string& d) {
    if (d == "both") return {vi::Direction::Min, vi::Direction::Max};
    if (d == "min") return {vi::Direction::Min};
    if (d == "max") return {vi::Direction::Max};
    throw UsageError("--direction must be min, max or both");
}

model::ParseOptions parse_options(const RunConfig& cfg) {
    model::ParseOptions opts;
    for (const auto& c : cfg.constants) {
        auto eq = c.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--const expects NAME=VALUE, got '" + c + "'");
        try {
            std::size_t used = 0;
            std::string value = c.substr(eq + 1);
            opts.constants[c.substr(0, eq)] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw UsageError("--const value of '" + c + "' is not a number");
        }
    }
    return opts;
}

struct LoadedModel {
    std::shared_ptr<const model::GuardedModel> model;
    model::ExprPtr target;
};

LoadedModel load_model(const RunConfig& cfg) {
    auto parsed = model::parse_model_file(cfg.model_path, parse_options(cfg));
    LoadedModel lm;
    if (!cfg.target.empty()) {
        lm.target = model::parse_expression(cfg.target, parsed);
        if (lm.target->type() != model::Type::Bool) throw SemanticError("--target is not a Boolean expression");
    } else {
        lm.target = parsed.target();
    }
    if (lm.target)
        lm.model = std::make_shared<model::GuardedModel>(model::reachability_rewards(parsed, lm.target));
    else
        lm.model = std::make_shared<model::GuardedModel>(std::move(parsed));
    return lm;
}

void write_json(const RunConfig& cfg, const json& doc, std::ostream& out) {
    if (cfg.json_path.empty()) return;
    if (cfg.json_path == "-") {
        out << doc.dump(2) << '\n';
        return;
    }
    std::ofstream file(cfg.json_path);
    if (!file) throw Error("cannot write '" + cfg.json_path + "'");
    file << doc.dump(2) << '\n';
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

json base_doc(const RunConfig& cfg, const std::vector<double>& deltas) {
    double horizon = 0.0;
    for (double d : deltas) horizon += d;
    return {{"command", cfg.command}, {"model", cfg.model_path}, {"horizon", horizon}, {"epsilon", cfg.epsilon}};
}

json phase_list(const std::vector<double>& deltas) {
    json out = json::array();
    double h = 0.0;
    for (double d : deltas) {
        h += d;
        out.push_back({{"horizon", h}});
    }
    return out;
}

// --- explicit -------------------------------------------------------------

struct ExplicitRun {
    explicit_engine::SparseCtmc ctmc;
    std::vector<std::vector<double>> values;  // per phase
    std::size_t k = 0;                        // of the last phase
};

ExplicitRun run_explicit(const RunConfig& cfg, const LoadedModel& lm, const std::vector<double>& deltas,
                         json& timings) {
    Stopwatch sw;
    auto reach = model::reachable(*lm.model, cfg.state_cap);
    warn_deadlocks(cfg, static_cast<double>(reach.deadlocks.size()));
    auto sem = model::uniformise(lm.model, reach, cfg.lambda);
    sem = model::apply_target_absorption(std::move(sem), lm.target);
    ExplicitRun run{explicit_engine::build_explicit(sem, reach), {}, 0};
    timings["build"] = sw.lap();
    if (!cfg.dump_matrix.empty()) {
        std::ofstream out(cfg.dump_matrix);
        if (!out) throw Error("cannot write '" + cfg.dump_matrix + "'");
        explicit_engine::write_matrix(out, run.ctmc);
    }
    const double phase_eps = cfg.epsilon / static_cast<double>(deltas.size());
    for (std::size_t j = 0; j < deltas.size(); ++j) {
        std::optional<std::span<const double>> f;
        if (j > 0) f = std::span<const double>(run.values.back());
        auto r = explicit_engine::explicit_value(run.ctmc, deltas[j], phase_eps, f, cfg.kahan);
        run.k = r.k;
        run.values.push_back(std::move(r.q));
    }
    timings["iterate"] = sw.lap();
    return run;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
    auto deltas = horizons(cfg);
    auto lm = load_model(cfg);
    json timings = json::object();
    auto run = run_explicit(cfg, lm, deltas, timings);
    double value = run.values.back()[0];
    json doc = base_doc(cfg, deltas);
    doc["direction"] = "exact";
    doc["k"] = run.k;
    doc["lambda"] = run.ctmc.lambda;
    doc["states"] = run.ctmc.n;
    doc["value"] = value;
    if (!cfg.phases.empty()) {
        json phases = phase_list(deltas);
        for (std::size_t j = 0; j < deltas.size(); ++j) phases[j]["value"] = run.values[j][0];
        doc["phases"] = phases;
    }
    doc["timings"] = timings;
    out << "value " << fmt(value) << "  (states " << run.ctmc.n << ", lambda " << fmt(run.ctmc.lambda) << ", k "
        << run.k << ")\n";
    write_json(cfg, doc, out);
    return kOk;
}

// --- abstraction ----------------------------------------------------------

struct BoundPipeline {
    std::unique_ptr<bdd::Manager> mgr;
    symbolic::SymbolicLayout layout;
    std::optional<partition::Partition> partition;
    abstraction::Abstraction abs;
    double states = 0.0;
    std::size_t refine_iterations = 0;
    bool fixpoint = false;
};

std::vector<model::ExprPtr> read_predicates(const std::string& path, const model::GuardedModel& m) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open predicate file '" + path + "'");
    std::vector<model::ExprPtr> out;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line.compare(first, 2, "//") == 0) continue;
        try {
            out.push_back(model::parse_expression(line, m));
        } catch (const ParseError& e) {
            throw ParseError(path + ": predicate on line " + std::to_string(line_no) + ": " + e.what(), line_no, 1);
        }
    }
    return out;
}

BoundPipeline build_pipeline(const RunConfig& cfg, const LoadedModel& lm, json& timings) {
    BoundPipeline bp;
    Stopwatch sw;
    const auto& m = *lm.model;
    bp.layout = symbolic::SymbolicLayout::for_model(m);
    bp.mgr = std::make_unique<bdd::Manager>(bp.layout.total_vars(), 20);
    auto& mgr = *bp.mgr;
    auto sym = symbolic::build_symbolic(m, mgr, bp.layout);
    bdd::Bdd reach = symbolic::reachable_set(mgr, sym);
    bp.states = symbolic::count_states(mgr, bp.layout, reach);
    if (bp.states > static_cast<double>(cfg.state_cap) * 1e3)
        throw StateCapExceeded(static_cast<std::size_t>(static_cast<double>(cfg.state_cap) * 1e3));
    if (cfg.err && !cfg.deadlocks_reported) {
        bdd::Bdd enabled = mgr.bdd_false();
        for (const auto& t : sym.transitions) enabled = enabled | mgr.exists(bp.layout.next_vars(), t);
        warn_deadlocks(cfg, symbolic::count_states(mgr, bp.layout, reach & !enabled));
    }
    double max_exit = abstraction::max_exit_rate(m, mgr, bp.layout, reach);
    model::UniformisedSemantics sem;
    sem.model = lm.model;
    sem.lambda = max_exit > 0.0 ? max_exit : 1.0;
    if (cfg.lambda) {
        if (max_exit > *cfg.lambda)
            throw SemanticError("uniformisation rate " + fmt(*cfg.lambda) + " is below the maximal exit rate " +
                                fmt(max_exit));
        sem.lambda = *cfg.lambda;
    }
    sem = model::apply_target_absorption(std::move(sem), lm.target);
    std::vector<bdd::Bdd> transitions = sym.transitions;
    if (sem.absorb) {
        bdd::Bdd absorbing = symbolic::predicate_bdd(mgr, bp.layout, m, sem.absorb);
        for (auto& t : transitions) t = t & !absorbing;
    }
    timings["symbolic"] = sw.lap();

    std::vector<bdd::Bdd> predicates;
    if (!cfg.predicates_path.empty())
        for (const auto& e : read_predicates(cfg.predicates_path, m))
            predicates.push_back(symbolic::predicate_bdd(mgr, bp.layout, m, e));
    auto p0 = partition::initial_partition(mgr, bp.layout, reach, predicates);
    auto refined = partition::refine(mgr, bp.layout, p0, transitions, cfg.refine_iters);
    bp.partition = refined.partition;
    bp.refine_iterations = refined.iterations;
    bp.fixpoint = refined.fixpoint;
    timings["refine"] = sw.lap();

    bp.abs = abstraction::build_abstraction(sem, mgr, bp.layout, *bp.partition, cfg.workers);
    timings["abstract"] = sw.lap();
    if (!cfg.dump_abstraction.empty()) abstraction::write_abstraction_file(cfg.dump_abstraction, bp.abs);
    if (!cfg.export_partition.empty()) {
        auto explicit_reach = model::reachable(m, cfg.state_cap);
        std::ofstream out(cfg.export_partition);
        if (!out) throw Error("cannot write '" + cfg.export_partition + "'");
        partition::export_partition(out, mgr, bp.layout, *bp.partition, explicit_reach.states);
    }
    return bp;
}

BoundPipeline load_pipeline(const RunConfig& cfg, json& timings) {
    Stopwatch sw;
    BoundPipeline bp;
    bp.abs = abstraction::read_abstraction_file(cfg.abstraction_path);
    abstraction::check_feasible(bp.abs.ectmc);
    bp.states = static_cast<double>(bp.abs.concrete_states);
    timings["load"] = sw.lap();
    return bp;
}

struct Bounds {
    // per direction, per phase, per block
    std::optional<vi::ChainResult> lo, hi;
};

Bounds compute_bounds(const RunConfig& cfg, const abstraction::Abstraction& a, const std::vector<double>& deltas,
                      json& timings) {
    Stopwatch sw;
    Bounds b;
    for (auto dir : directions(cfg.direction)) {
        std::vector<vi::Phase> phases;
        for (double d : deltas) phases.push_back({d, dir});
        auto r = vi::chain(a.ectmc, a.rewards, phases, cfg.epsilon);
        (dir == vi::Direction::Min ? b.lo : b.hi) = std::move(r);
    }
    timings["iterate"] = sw.lap();
    return b;
}

void describe_bounds(json& doc, const Bounds& b, std::size_t block, const std::vector<double>& deltas, bool per_block,
                     std::size_t n_blocks) {
    const auto& any = b.lo ? *b.lo : *b.hi;
    doc["k"] = any.ks.back();
    if (b.lo && b.hi) {
        doc["direction"] = "both";
        doc["interval"] = {b.lo->values.back()[block], b.hi->values.back()[block]};
    } else {
        doc["direction"] = b.lo ? "min" : "max";
        doc["value"] = any.values.back()[block];
    }
    if (deltas.size() > 1) {
        json phases = phase_list(deltas);
        for (std::size_t j = 0; j < deltas.size(); ++j) {
            if (b.lo && b.hi)
                phases[j]["interval"] = {b.lo->values[j][block], b.hi->values[j][block]};
            else
                phases[j]["value"] = any.values[j][block];
        }
        doc["phases"] = phases;
    }
    if (per_block) {
        json blocks = json::array();
        for (std::size_t z = 0; z < n_blocks; ++z) {
            if (b.lo && b.hi)
                blocks.push_back({b.lo->values.back()[z], b.hi->values.back()[z]});
            else
                blocks.push_back(any.values.back()[z]);
        }
        doc["per_block"] = blocks;
    }
}

void print_bounds(std::ostream& out, const Bounds& b, std::size_t block) {
    if (b.lo && b.hi)
        out << "interval [" << fmt(b.lo->values.back()[block]) << ", " << fmt(b.hi->values.back()[block]) << "]";
    else if (b.lo)
        out << "lower bound " << fmt(b.lo->values.back()[block]);
    else
        out << "upper bound " << fmt(b.hi->values.back()[block]);
}

json pipeline_doc(const RunConfig& cfg, const BoundPipeline& bp, const std::vector<double>& deltas) {
    json doc = base_doc(cfg, deltas);
    doc["lambda"] = bp.abs.ectmc.lambda;
    doc["states"] = static_cast<std::uint64_t>(bp.states);
    doc["blocks"] = bp.abs.ectmc.n_blocks;
    if (bp.partition) {
        doc["refine_iterations"] = bp.refine_iterations;
        doc["fixpoint"] = bp.fixpoint;
    }
    return doc;
}

int cmd_bound(const RunConfig& cfg, std::ostream& out) {
    auto deltas = horizons(cfg);
    json timings = json::object();
    BoundPipeline bp;
    if (!cfg.abstraction_path.empty()) {
        bp = load_pipeline(cfg, timings);
    } else {
        auto lm = load_model(cfg);
        bp = build_pipeline(cfg, lm, timings);
    }
    auto b = compute_bounds(cfg, bp.abs, deltas, timings);
    json doc = pipeline_doc(cfg, bp, deltas);
    const std::size_t init = bp.abs.ectmc.initial_block;
    describe_bounds(doc, b, init, deltas, cfg.per_block, bp.abs.ectmc.n_blocks);
    doc["timings"] = timings;
    print_bounds(out, b, init);
    out << "  (blocks " << bp.abs.ectmc.n_blocks << ", states " << fmt(bp.states) << ", k "
        << (b.lo ? b.lo->ks.back() : b.hi->ks.back()) << ")\n";
    write_json(cfg, doc, out);
    return kOk;
}

int cmd_compare(RunConfig cfg, std::ostream& out) {
    cfg.direction = "both";
    auto deltas = horizons(cfg);
    json timings = json::object();
    auto lm = load_model(cfg);
    json explicit_timings = json::object();
    auto ex = run_explicit(cfg, lm, deltas, explicit_timings);
    timings["explicit"] = explicit_timings["build"].get<double>() + explicit_timings["iterate"].get<double>();

    BoundPipeline bp = cfg.abstraction_path.empty() ? build_pipeline(cfg, lm, timings) : load_pipeline(cfg, timings);
    auto b = compute_bounds(cfg, bp.abs, deltas, timings);

    // explicit values carry eps, each bound eps as well
    const double slack = 2.0 * cfg.epsilon;
    const auto& values = ex.values.back();
    std::size_t checked = 0, violations = 0;
    double worst = 0.0;
    auto check = [&](std::size_t state, std::size_t block) {
        ++checked;
        double lo = b.lo->values.back()[block], hi = b.hi->values.back()[block];
        double excess = std::max(lo - slack - values[state], values[state] - hi - slack);
        if (excess > 0.0) {
            ++violations;
            worst = std::max(worst, excess);
        }
    };
    if (bp.partition) {
        for (std::size_t s = 0; s < ex.ctmc.n; ++s)
            check(s, partition::s_abs(*bp.mgr, bp.layout, *bp.partition, ex.ctmc.states[s]));
    } else {
        check(0, bp.abs.ectmc.initial_block);
    }
    const std::size_t init = bp.abs.ectmc.initial_block;
    json doc = pipeline_doc(cfg, bp, deltas);
    describe_bounds(doc, b, init, deltas, cfg.per_block, bp.abs.ectmc.n_blocks);
    doc["explicit_value"] = values[0];
    doc["gap"] = b.hi->values.back()[init] - b.lo->values.back()[init];
    doc["states_checked"] = checked;
    doc["violations"] = violations;
    doc["pass"] = violations == 0;
    doc["timings"] = timings;
    out << "explicit " << fmt(values[0]) << "  ";
    print_bounds(out, b, init);
    out << "  gap " << fmt(b.hi->values.back()[init] - b.lo->values.back()[init]) << '\n';
    if (violations == 0) {
        out << "PASS: " << checked << " state(s) inside their bounds\n";
    } else {
        out << "FAIL: " << violations << " of " << checked << " state(s) outside their bounds (worst by "
            << fmt(worst) << ")\n";
    }
    write_json(cfg, doc, out);
    return violations == 0 ? kOk : kSoundnessViolation;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    auto deltas = horizons(cfg);
    Stopwatch sw;
    auto m = ctmdp::parse_ctmdp_file(cfg.model_path);
    if (cfg.initial_state >= m.n) throw UsageError("--initial is not a state of the CTMDP");
    json timings = {{"load", sw.lap()}};
    Bounds b;
    for (auto dir : directions(cfg.direction)) {
        std::vector<vi::Phase> phases;
        for (double d : deltas) phases.push_back({d, dir});
        (dir == vi::Direction::Min ? b.lo : b.hi) = vi::chain(m, phases, cfg.epsilon);
    }
    timings["iterate"] = sw.lap();
    json doc = base_doc(cfg, deltas);
    doc["lambda"] = m.lambda;
    doc["states"] = m.n;
    describe_bounds(doc, b, cfg.initial_state, deltas, cfg.per_block, m.n);
    doc["timings"] = timings;
    print_bounds(out, b, cfg.initial_state);
    out << "  (state " << cfg.initial_state << ", k " << (b.lo ? b.lo->ks.back() : b.hi->ks.back()) << ")\n";
    write_json(cfg, doc, out);
    return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("model", cfg.model_path, "Model file")->required();
    sub->add_option("--time,-t", cfg.time, "Time horizon")->capture_default_str();
    sub->add_option("--epsilon,-e", cfg.epsilon, "Precision")->capture_default_str();
    sub->add_option("--phases", cfg.phases,
                    "Comma-separated phase lengths, computed in the given order; phase j's values become the final "
                    "reward of phase j+1. Replaces --time");
    sub->add_option("--json", cfg.json_path, "Write the result as JSON to PATH ('-' for stdout)");
}

void add_model_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--const,-c", cfg.constants, "Constant value NAME=VALUE (repeatable)");
    sub->add_option("--lambda", cfg.lambda, "Uniformisation rate (checked against the exit rates)");
    sub->add_option("--state-cap", cfg.state_cap, "Limit on explicitly enumerated states")->capture_default_str();
    sub->add_option("--target", cfg.target,
                    "Make states satisfying EXPR absorbing and use r = 0, f = [EXPR] (reachability probability)");
}

void add_abstraction_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--refine-iters,-n", cfg.refine_iters, "Signature refinement iterations")->capture_default_str();
    sub->add_option("--predicates", cfg.predicates_path, "File with one predicate per line for the initial partition");
    sub->add_option("--dump-abstraction", cfg.dump_abstraction, "Write the abstraction as JSON");
    sub->add_option("--abstraction", cfg.abstraction_path, "Use a previously dumped abstraction instead of building one");
    sub->add_option("--export-partition", cfg.export_partition, "Write 'stateIndex blockIndex' lines (small models)");
    sub->add_option("--workers", cfg.workers, "Threads for the abstraction sweep")->capture_default_str();
    sub->add_flag("--per-block", cfg.per_block, "Include the bounds of every block in the JSON result");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    cfg.err = &err;
    CLI::App app{"Bounds on transient rewards of continuous-time Markov chains", "symbound"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "symbound 0.1.0");

    auto* check = app.add_subcommand("check", "Exact value on the explicit state space");
    add_common(check, cfg);
    add_model_options(check, cfg);
    check->add_flag("--kahan", cfg.kahan, "Compensated summation in the matrix-vector products");
    check->add_option("--dump-matrix", cfg.dump_matrix, "Write the uniformised matrix as 'src dst prob' lines");

    auto* bound = app.add_subcommand("bound", "Lower and upper bounds from an abstraction");
    add_common(bound, cfg);
    add_model_options(bound, cfg);
    add_abstraction_options(bound, cfg);
    bound->add_option("--direction,-d", cfg.direction, "min, max or both")->capture_default_str();

    auto* compare = app.add_subcommand("compare", "Check that the exact value lies within the bounds");
    add_common(compare, cfg);
    add_model_options(compare, cfg);
    add_abstraction_options(compare, cfg);

    auto* solve = app.add_subcommand("solve", "Optimal values of an explicit CTMDP file");
    add_common(solve, cfg);
    solve->add_option("--direction,-d", cfg.direction, "min, max or both")->capture_default_str();
    solve->add_option("--initial", cfg.initial_state, "State to report")->capture_default_str();
    solve->add_flag("--per-block", cfg.per_block, "Include the values of every state in the JSON result");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        validate(cfg);
        if (check->parsed()) {
            cfg.command = "check";
            return cmd_check(cfg, out);
        }
        if (bound->parsed()) {
            cfg.command = "bound";
            return cmd_bound(cfg, out);
        }
        if (compare->parsed()) {
            cfg.command = "compare";
            return cmd_compare(cfg, out);
        }
        cfg.command = "solve";
        return cmd_solve(cfg, out);
    } catch (const ParseError& e) {
        err << "error: " << cfg.model_path << ": " << e.what() << '\n';
        return kParse;
    } catch (const SemanticError& e) {
        err << "error: " << e.what() << '\n';
        return kSemantic;
    } catch (const StateCapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kCapExceeded;
    } catch (const IterationCapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kCapExceeded;
    } catch (const InfeasibleAbstraction& e) {
        err << "error: infeasible abstraction: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace symbound::cli
