#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it with string streams.
//
// Exit status: 0 predicate true / success, 1 predicate false, 2 usage or
// input error, 3 resource limit exceeded.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crekit/decision.hpp"
#include "crekit/engine.hpp"
#include "crekit/error.hpp"
#include "crekit/partition.hpp"
#include "crekit/serialize.hpp"
#include "crekit/syntax.hpp"
#include "crekit/unambiguity.hpp"

namespace crekit::cli {

enum class Format { Text, Json };

struct CliConfig {
    Limits limits;
    Format format = Format::Text;
};

enum Exit : int { kTrue = 0, kFalse = 1, kUsage = 2, kResource = 3 };

/// Failure raised by the front end itself (bad arguments, unreadable files).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// "@path" reads the argument from a file.
inline std::string resolve_arg(const std::string& arg) {
    if (arg.size() > 1 && arg.front() == '@')
        return read_file(arg.substr(1));
    return arg;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string weights_text(const PartitionInstance& inst) {
    std::string s;
    for (auto w : inst.weights()) {
        if (!s.empty())
            s += ' ';
        s += std::to_string(w);
    }
    return s;
}

class Runner {
public:
    Runner(const CliConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

    bool json() const { return cfg_.format == Format::Json; }
    const Limits& limits() const { return cfg_.limits; }

    void emit(const Json& j) { out_ << j.dump() << '\n'; }
    std::ostream& text() { return out_; }

    int parse(const std::string& text) {
        Expr e = parse_expr(resolve_arg(text));
        if (json())
            emit(envelope(true, std::nullopt,
                          Json{{"expr", render_expr(e)}, {"alphabet", alphabet_of(e).symbols()}}));
        else
            out_ << render_expr(e) << '\n';
        return kTrue;
    }

    int member(const std::string& expr, const std::string& word) {
        Expr e = parse_expr(resolve_arg(expr));
        Word w = parse_word(resolve_arg(word));
        bool in = crekit::member(e, w, limits());
        if (json())
            emit(envelope(in));
        else
            out_ << (in ? "accepted" : "rejected") << '\n';
        return in ? kTrue : kFalse;
    }

    int enumerate(const std::string& expr, std::uint64_t max_len) {
        Expr e = parse_expr(resolve_arg(expr));
        auto words = crekit::enumerate(e, max_len, limits());
        if (json()) {
            Json list = Json::array();
            for (const auto& w : words)
                list.push_back(w);
            emit(envelope(true, std::nullopt, Json{{"count", words.size()}, {"words", list}}));
        } else {
            for (const auto& w : words)
                out_ << format_word(w) << '\n';
        }
        return kTrue;
    }

    int lengths(const std::string& expr, std::uint64_t cutoff) {
        Expr e = parse_expr(resolve_arg(expr));
        LengthSet l = length_set(e, cutoff);
        if (json()) {
            emit(envelope(true, std::nullopt, to_json(l)));
        } else {
            out_ << "members:";
            for (auto m : l.members)
                out_ << ' ' << m;
            out_ << "\nsaturated: " << yes_no(l.saturated) << '\n';
        }
        return kTrue;
    }

    int unambiguous(const std::string& expr) {
        Expr e = parse_expr(resolve_arg(expr));
        UnambiguityVerdict v = check_unambiguous(e);
        if (json()) {
            Json report = to_json(v);
            report["single_occurrence"] = is_single_occurrence(e);
            emit(envelope(v.unambiguous, std::nullopt, report));
        } else if (v.unambiguous) {
            out_ << "unambiguous\n";
        } else {
            out_ << "ambiguous: " << describe(*v.conflict) << '\n';
        }
        return v.unambiguous ? kTrue : kFalse;
    }

    int include(const std::string& a, const std::string& b) {
        InclusionVerdict v =
            includes(parse_expr(resolve_arg(a)), parse_expr(resolve_arg(b)), limits());
        if (json())
            emit(envelope(v.holds, v.witness));
        else if (v.holds)
            out_ << "holds\n";
        else
            out_ << "fails: " << format_word(*v.witness) << '\n';
        return v.holds ? kTrue : kFalse;
    }

    int overlap(const std::string& a, const std::string& b) {
        OverlapVerdict v =
            overlaps(parse_expr(resolve_arg(a)), parse_expr(resolve_arg(b)), limits());
        if (json())
            emit(envelope(v.overlaps, v.witness));
        else if (v.overlaps)
            out_ << "overlaps: " << format_word(*v.witness) << '\n';
        else
            out_ << "disjoint\n";
        return v.overlaps ? kTrue : kFalse;
    }

    int equiv(const std::string& a, const std::string& b) {
        EquivalenceVerdict v =
            equivalent(parse_expr(resolve_arg(a)), parse_expr(resolve_arg(b)), limits());
        const char* side = !v.side ? nullptr : *v.side == Side::Left ? "left" : "right";
        if (json())
            emit(envelope(v.equivalent, v.witness,
                          Json{{"side", side ? Json(side) : Json(nullptr)}}));
        else if (v.equivalent)
            out_ << "equivalent\n";
        else
            out_ << "differs: " << format_word(*v.witness) << " (only in " << side << ")\n";
        return v.equivalent ? kTrue : kFalse;
    }

    int reduce(const std::string& path) {
        PartitionInstance inst = parse_weights(read_file(path));
        auto [e1, e2] = build_expressions(inst);
        if (json())
            emit(envelope(true, std::nullopt,
                          Json{{"n", *inst.half()},
                               {"e1", render_expr(e1)},
                               {"e2", render_expr(e2)},
                               {"alphabet", alphabet_of(e2).symbols()}}));
        else
            out_ << render_expr(e1) << '\n' << render_expr(e2) << '\n';
        return kTrue;
    }

    int partition(const std::string& path) {
        PartitionInstance inst = parse_weights(read_file(path));
        std::optional<Word> counterexample;
        bool exists = decide_partition_via_inclusion(inst, [&](const Expr& a, const Expr& b) {
            auto v = includes(a, b, limits());
            counterexample = v.witness;
            return v;
        });
        if (json())
            emit(envelope(exists, counterexample,
                          Json{{"total", inst.total()}, {"odd_total", !inst.half()}}));
        else
            out_ << yes_no(exists) << '\n';
        return exists ? kTrue : kFalse;
    }

    int verify(const std::string& path) {
        TheoremReport r = verify_theorem_instance(parse_weights(read_file(path)), limits());
        if (json()) {
            emit(envelope(r.all_ok(), r.inclusion.witness, to_json(r)));
        } else {
            out_ << "weights: " << weights_text(r.instance) << '\n'
                 << "n: " << r.n << '\n'
                 << "e1: " << render_expr(r.e1) << '\n'
                 << "e2: " << render_expr(r.e2) << '\n'
                 << "partition: " << yes_no(r.partition.exists);
            if (r.partition.subset) {
                out_ << " (subset";
                for (auto i : *r.partition.subset)
                    out_ << ' ' << i;
                out_ << ')';
            }
            out_ << '\n'
                 << "inclusion: " << (r.inclusion.holds ? "holds" : "fails") << '\n';
            if (r.inclusion.witness)
                out_ << "witness: " << format_word(*r.inclusion.witness) << '\n';
            out_ << "unambiguous: e1 " << yes_no(r.e1_unambiguous) << ", e2 "
                 << yes_no(r.e2_unambiguous) << '\n'
                 << "length laws: " << (r.length_laws_ok() ? "ok" : "violated") << '\n'
                 << "witness law: " << (r.witness_ok ? "ok" : "violated") << '\n'
                 << "iff: " << (r.iff_ok() ? "ok" : "violated") << '\n';
        }
        return r.all_ok() ? kTrue : kFalse;
    }

    int verify_suite(std::uint64_t kmax, std::uint64_t wmax) {
        std::uint64_t instances = 0, failures = 0;
        for (std::uint64_t k = 1; k <= kmax; ++k) {
            std::vector<std::uint64_t> w(k, 1);
            while (true) {
                std::uint64_t total = 0;
                for (auto x : w)
                    total += x;
                if (total % 2 == 0) {
                    ++instances;
                    if (!verify_one(PartitionInstance(w)))
                        ++failures;
                }
                std::size_t i = k;
                while (i > 0 && w[i - 1] == wmax)
                    w[--i] = 1;
                if (i == 0)
                    break;
                ++w[i - 1];
            }
        }
        if (json())
            emit(envelope(failures == 0, std::nullopt,
                          Json{{"instances", instances}, {"failures", failures}}));
        else
            out_ << "instances: " << instances << " failures: " << failures << '\n';
        return failures == 0 ? kTrue : kFalse;
    }

private:
    bool verify_one(const PartitionInstance& inst) {
        try {
            TheoremReport r = verify_theorem_instance(inst, limits());
            // The reduction's own answer, through the generic oracle path.
            bool decided = decide_partition_via_inclusion(inst, limits());
            bool ok = r.all_ok() && decided == r.partition.exists;
            if (json()) {
                Json report = to_json(r);
                report["decided"] = decided;
                emit(envelope(ok, r.inclusion.witness, report));
            } else {
                out_ << "[" << weights_text(inst) << "] n=" << r.n
                     << " partition=" << yes_no(r.partition.exists)
                     << " inclusion=" << (r.inclusion.holds ? "holds" : "fails");
                if (r.inclusion.witness)
                    out_ << " witness=" << format_word(*r.inclusion.witness);
                out_ << (ok ? " ok" : " MISMATCH") << '\n';
            }
            out_.flush();
            return ok;
        } catch (const Error& e) {
            if (json())
                emit(error_envelope(to_string(e.code()), e.what()));
            else
                out_ << "[" << weights_text(inst) << "] " << to_string(e.code()) << ": "
                     << e.what() << '\n';
            return false;
        }
    }

    const CliConfig& cfg_;
    std::ostream& out_;
};

inline void report_error(std::string_view code, const std::string& message, bool json,
                         std::ostream& out, std::ostream& err) {
    err << "error[" << code << "]: " << message << '\n';
    if (json)
        out << error_envelope(code, message).dump() << '\n';
}

inline std::optional<std::uint64_t> env_cap() {
    const char* v = std::getenv("CREKIT_EXPANSION_CAP");
    if (!v || !*v)
        return std::nullopt;
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (*end != '\0' || n == 0)
        throw UsageError("CREKIT_EXPANSION_CAP must be a positive integer");
    return n;
}

} // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decision procedures for regular expressions with counting", "crekit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::uint64_t> cap, budget, limit;
    std::string format = "text";
    app.add_option("--cap", cap, "expansion cap in AST nodes (default 100000)")
        ->check(CLI::PositiveNumber);
    app.add_option("--budget", budget, "product-state budget (default 1000000)")
        ->check(CLI::PositiveNumber);
    app.add_option("--limit", limit, "word limit for enumeration (default 100000)")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

    std::string e1, e2, word, file;
    std::uint64_t number = 0, number2 = 0;
    std::function<int(detail::Runner&)> action;

    auto* c = app.add_subcommand("parse", "parse and print the canonical form");
    c->add_option("EXPR", e1)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.parse(e1); }; });

    c = app.add_subcommand("member", "test whether WORD is in L(EXPR)");
    c->add_option("EXPR", e1)->required();
    c->add_option("WORD", word)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.member(e1, word); }; });

    c = app.add_subcommand("enumerate", "list words up to MAXLEN");
    c->add_option("EXPR", e1)->required();
    c->add_option("MAXLEN", number)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.enumerate(e1, number); }; });

    c = app.add_subcommand("lengths", "word lengths up to CUTOFF");
    c->add_option("EXPR", e1)->required();
    c->add_option("CUTOFF", number)->required()->check(CLI::PositiveNumber);
    c->callback([&] { action = [&](detail::Runner& r) { return r.lengths(e1, number); }; });

    c = app.add_subcommand("unambiguous", "check weak unambiguity");
    c->add_option("EXPR", e1)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.unambiguous(e1); }; });

    c = app.add_subcommand("include", "decide L(LEFT) ⊆ L(RIGHT)");
    c->add_option("LEFT", e1)->required();
    c->add_option("RIGHT", e2)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.include(e1, e2); }; });

    c = app.add_subcommand("overlap", "decide whether the languages intersect");
    c->add_option("LEFT", e1)->required();
    c->add_option("RIGHT", e2)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.overlap(e1, e2); }; });

    c = app.add_subcommand("equiv", "decide language equality");
    c->add_option("LEFT", e1)->required();
    c->add_option("RIGHT", e2)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.equiv(e1, e2); }; });

    c = app.add_subcommand("reduce", "print E1 and E2 for a weights file");
    c->add_option("WEIGHTS_FILE", file)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.reduce(file); }; });

    c = app.add_subcommand("partition", "decide PARTITION through one inclusion query");
    c->add_option("WEIGHTS_FILE", file)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.partition(file); }; });

    c = app.add_subcommand("verify", "check the reduction on one instance");
    c->add_option("WEIGHTS_FILE", file)->required();
    c->callback([&] { action = [&](detail::Runner& r) { return r.verify(file); }; });

    c = app.add_subcommand("verify-suite", "check every instance with k <= KMAX, weights <= WMAX");
    c->add_option("KMAX", number)->required()->check(CLI::PositiveNumber);
    c->add_option("WMAX", number2)->required()->check(CLI::PositiveNumber);
    c->callback([&] {
        action = [&](detail::Runner& r) { return r.verify_suite(number, number2); };
    });

    std::vector<std::string> argv{"crekit"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::vector<const char*> raw;
    for (const auto& a : argv)
        raw.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kTrue;
    } catch (const CLI::ParseError& e) {
        detail::report_error("USAGE", e.what(), format == "json", out, err);
        return kUsage;
    }

    const bool json = format == "json";
    try {
        CliConfig cfg;
        if (auto env = detail::env_cap())
            cfg.limits.expansion_cap = *env;
        if (cap)
            cfg.limits.expansion_cap = *cap;
        if (budget)
            cfg.limits.state_budget = *budget;
        if (limit)
            cfg.limits.word_limit = *limit;
        cfg.format = json ? Format::Json : Format::Text;
        detail::Runner runner(cfg, out);
        return action(runner);
    } catch (const Error& e) {
        detail::report_error(to_string(e.code()), e.what(), json, out, err);
        return is_resource_error(e.code()) ? kResource : kUsage;
    } catch (const UsageError& e) {
        detail::report_error("USAGE", e.what(), json, out, err);
        return kUsage;
    }
}

} // namespace crekit::cli
