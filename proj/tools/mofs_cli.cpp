// Command-line front end: construction, verification, mate search and
// maximality certification for sets of mutually orthogonal frequency
// squares.
//
// Exit codes: 0 success, 1 mathematical negative (no mate / not certified /
// verification failed), 2 usage error, 3 budget exhausted.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mofs/algebra_rank.hpp"
#include "mofs/balance.hpp"
#include "mofs/constructions.hpp"
#include "mofs/core.hpp"
#include "mofs/exact_search.hpp"
#include "mofs/polytope.hpp"
#include "mofs/relations.hpp"
#include "mofs/tower.hpp"

namespace {

constexpr int kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// set files are JSON; plain text means one or more square blocks
mofs::MofsSet load_set(const std::string& path) {
    std::string text = slurp(path);
    std::size_t i = text.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && text[i] == '{') return mofs::set_from_json(text);
    auto squares = mofs::parse_square_blocks(text);
    if (squares.empty()) throw std::runtime_error(path + " holds no squares");
    return mofs::MofsSet(std::move(squares));
}

void emit_set(const mofs::MofsSet& set, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << mofs::set_to_json(set) << "\n";
    } else {
        spill(path, mofs::set_to_json(set) + "\n");
        std::cerr << "wrote " << set.size() << " squares to " << path << "\n";
    }
}

void emit_square(const mofs::FrequencySquare& sq, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << mofs::format_square(sq);
    } else {
        spill(path, mofs::format_square(sq));
        std::cerr << "wrote square to " << path << "\n";
    }
}

void print_mat3(const mofs::balance::Mat3& m, std::ostream& os) {
    for (const auto& row : m) {
        for (long long v : row) os << v << ' ';
        os << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mutually orthogonal frequency squares toolkit"};
    app.set_help_flag("--help", "print help");  // frees -h/--h for the tower exponent
    app.require_subcommand(1);

    long long budget_nodes = mofs::exact::SearchBudget::default_node_limit();
    long long budget_ms = 0;
    int threads = 1;
    bool transcript = false;
    app.add_option("--budget-nodes", budget_nodes, "node limit for backtracking searches");
    app.add_option("--budget-ms", budget_ms, "wall-clock limit in milliseconds (0 = none)");
    app.add_option("--threads", threads, "worker threads for the exact search");
    app.add_flag("--transcript", transcript, "log each new search depth to stderr (serializes the search)");

    std::string in_path, out_path, method = "exact";
    int q = 2, h = 1, d = 1, r1 = 0, r2 = 1, census_n = 4, census_m = 2;
    long long poly_m = 1, poly_beta = 2;
    std::string poly_x;
    bool census_mates = false;

    auto* construct = app.add_subcommand("construct", "build sets and squares");
    construct->require_subcommand(1);
    auto* complete = construct->add_subcommand("complete", "complete set for a prime power");
    complete->add_option("--q", q, "prime power")->required();
    complete->add_option("--h", h, "tower exponent")->required();
    complete->add_option("-o,--output", out_path, "output set file");
    auto* dil = construct->add_subcommand("dilate", "blow entries up into constant blocks");
    dil->add_option("-i,--input", in_path, "input set file")->required();
    dil->add_option("-d", d, "block size")->required();
    dil->add_option("-o,--output", out_path, "output set file");
    auto* lift = construct->add_subcommand("lift", "lift an integer matrix to a binary square");
    lift->add_option("-i,--input", in_path, "matrix file: n lines of n integers")->required();
    lift->add_option("-d", d, "block size")->required();
    lift->add_option("-o,--output", out_path, "output square file");
    auto* circ = construct->add_subcommand("circulant-extension", "extend a dilated set");
    circ->add_option("-i,--input", in_path, "dilated set file")->required();
    circ->add_option("-d", d, "block size")->required();
    circ->add_option("-o,--output", out_path, "output square file");

    auto* verify = app.add_subcommand("verify", "validate squares and pairwise orthogonality");
    verify->add_option("-i,--input", in_path, "set file")->required();

    auto* mate = app.add_subcommand("mate", "find a square orthogonal to every member");
    mate->add_option("-i,--input", in_path, "set file")->required();
    mate->add_option("--method", method, "exact | balance | tower")->capture_default_str();
    mate->add_option("-o,--output", out_path, "output square file");

    auto* certify = app.add_subcommand("certify-max", "certify that a set is maximal");
    certify->add_option("-i,--input", in_path, "set file")->required();
    certify->add_option("--method", method, "search | relation | dilation | bound")->required();
    certify->add_option("--d", d, "dilation factor (method dilation)");

    auto* classify = app.add_subcommand("classify-pair", "row-pair profile and labels");
    classify->add_option("-i,--input", in_path, "set file with exactly two binary squares")->required();
    classify->add_option("--r1", r1, "first row")->required();
    classify->add_option("--r2", r2, "second row")->required();

    auto* relations_cmd = app.add_subcommand("relations", "relation space and JP relations");
    relations_cmd->add_option("-i,--input", in_path, "set file")->required();

    auto* decomp = app.add_subcommand("decompose-polytope", "integer decomposition of a lattice point");
    decomp->add_option("--m", poly_m, "half the maximum part size")->required();
    decomp->add_option("--beta", poly_beta, "scale (entry sum is 2*beta)")->required();
    decomp->add_option("--x", poly_x, "comma-separated entries x0,...,x2m")->required();

    auto* census = app.add_subcommand("census", "counts over a square type");
    census->add_option("--n", census_n, "order")->required();
    census->add_option("--m", census_m, "symbol count")->required();
    census->add_flag("--mates", census_mates, "also scan for squares with no mate");

    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    mofs::exact::SearchBudget budget;
    budget.node_limit = budget_nodes;
    budget.time_limit_ms = budget_ms;
    budget.threads = threads;
    mofs::exact::Transcript log;
    if (transcript)
        log = [](int depth, int row, int col, int symbol) {
            std::cerr << "depth " << depth << ": cell (" << row << "," << col << ") <- " << symbol << "\n";
        };

    try {
        if (complete->parsed()) {
            auto set = mofs::construct::complete_mofs_prime_power(q, h);
            emit_set(set, out_path);
            return kOk;
        }
        if (dil->parsed()) {
            emit_set(mofs::construct::dilate(load_set(in_path), d), out_path);
            return kOk;
        }
        if (lift->parsed()) {
            std::istringstream in(slurp(in_path));
            mofs::Grid x;
            std::string line;
            while (std::getline(in, line)) {
                std::istringstream ls(line);
                std::vector<int> row;
                int v;
                while (ls >> v) row.push_back(v);
                if (!row.empty()) x.push_back(std::move(row));
            }
            emit_square(mofs::construct::lift_blocks(x, d), out_path);
            return kOk;
        }
        if (circ->parsed()) {
            emit_square(mofs::construct::circulant_extension(load_set(in_path), d), out_path);
            return kOk;
        }

        if (verify->parsed()) {
            auto set = load_set(in_path);
            auto report = mofs::validate_mofs(set);
            for (const auto& issue : report.invalid_squares)
                std::cout << "square " << issue.square << ": " << issue.message << "\n";
            for (const auto& pair : report.failing_pairs)
                std::cout << "pair (" << pair.first << "," << pair.second << "): symbol pair (" << pair.sym_a
                          << "," << pair.sym_b << ") occurs " << pair.count << " times, expected "
                          << pair.expected << "\n";
            if (report.ok()) {
                std::cout << "OK: " << set.size() << " squares of type (" << set.order() << ";"
                          << set.lambda() << "), all pairs orthogonal\n";
                return kOk;
            }
            return kNegative;
        }

        if (mate->parsed()) {
            auto set = load_set(in_path);
            if (method == "exact") {
                auto res = mofs::exact::find_mate(set, budget, log);
                if (res.status == mofs::exact::MateStatus::Found) {
                    emit_square(*res.witness, out_path);
                    return kOk;
                }
                if (res.status == mofs::exact::MateStatus::NoneExists) {
                    std::cout << "NONE (exhaustive, " << res.nodes << " nodes)\n";
                    return kNegative;
                }
                std::cout << "INDETERMINATE (budget exhausted after " << res.nodes << " nodes)\n";
                return kBudget;
            }
            if (method == "balance") {
                if (set.size() != 2 || set.symbol_count() != 2)
                    throw CLI::ValidationError("--method balance needs exactly two binary squares");
                auto res = mofs::balance::find_binary_mate(set[0], set[1], budget);
                if (res.partition_failed)
                    std::cerr << "partition search failed; exact fallback "
                              << (res.status == mofs::balance::BinaryMateResult::Status::Found ? "succeeded"
                                                                                               : "ran")
                              << "\n";
                switch (res.status) {
                    case mofs::balance::BinaryMateResult::Status::Found:
                        emit_square(*res.square, out_path);
                        return kOk;
                    case mofs::balance::BinaryMateResult::Status::NoneExists:
                        std::cout << "NONE (exhaustive fallback)\n";
                        return kNegative;
                    case mofs::balance::BinaryMateResult::Status::Indeterminate:
                        std::cout << "INDETERMINATE\n";
                        return kBudget;
                    case mofs::balance::BinaryMateResult::Status::PartitionNotFound:
                        std::cout << "PARTITION NOT FOUND\n";
                        return kNegative;
                }
            }
            if (method == "tower") {
                auto sq = mofs::tower::tower_mate(set.squares());
                emit_square(sq, out_path);
                return kOk;
            }
            throw CLI::ValidationError("unknown mate method " + method);
        }

        if (certify->parsed()) {
            auto set = load_set(in_path);
            if (method == "search") {
                auto res = mofs::exact::is_maximal(set, budget, log);
                if (res.verdict == mofs::exact::Maximality::Maximal) {
                    std::cout << "MAXIMAL (exhaustive)\n";
                    return kOk;
                }
                if (res.verdict == mofs::exact::Maximality::NotMaximal) {
                    std::cout << "NOT MAXIMAL: extension exists\n";
                    if (!out_path.empty()) emit_square(*res.extension, out_path);
                    return kNegative;
                }
                std::cout << "INDETERMINATE (budget)\n";
                return kBudget;
            }
            if (method == "relation") {
                auto cert = mofs::relations::certify_maximal_by_relation(set);
                if (cert.maximal) {
                    std::cout << "MAXIMAL (odd lambda + Jedwab-Popatia relation)\n";
                    return kOk;
                }
                std::cout << "NO CERTIFICATE (lambda " << (cert.lambda_odd ? "odd" : "even") << ", JP relation "
                          << (cert.jp_found ? "found" : "not found") << ")\n";
                return kNegative;
            }
            if (method == "dilation") {
                bool jp = false;
                if (set.lambda() % 2 == 1 && d % 2 == 1)
                    jp = !mofs::relations::find_jp_relations(set).relations.empty();
                auto cert = mofs::construct::dilation_certificate(set, d, jp);
                switch (cert.verdict) {
                    case mofs::construct::DilationVerdict::MaximalByCompleteness:
                        std::cout << "MAXIMAL (" << d << "-dilation of a complete set, d^2 not divisible by m)\n";
                        return kOk;
                    case mofs::construct::DilationVerdict::MaximalByRelation:
                        std::cout << "MAXIMAL (" << d << "-dilation; odd d, odd lambda, JP relation)\n";
                        return kOk;
                    case mofs::construct::DilationVerdict::NotMaximalDivisible:
                        std::cout << "NOT MAXIMAL: m | d, circulant extension exists\n";
                        if (!out_path.empty()) emit_square(*cert.witness, out_path);
                        return kNegative;
                    case mofs::construct::DilationVerdict::Unknown:
                        std::cout << "UNKNOWN (no rule applies)\n";
                        return kNegative;
                }
            }
            if (method == "bound") {
                auto fam = mofs::rank::indicator_family(set);
                auto res = mofs::rank::verify_independence(fam);
                auto bound = mofs::rank::hrs_bound(set.order(), set.symbol_count());
                std::cout << "rank " << res.rank << " of " << fam.size() << " vectors; size bound "
                          << bound.value << (bound.exact ? "" : " (floor)") << "; set has " << set.size()
                          << "\n";
                if (!res.independent) {
                    std::cout << "INDEPENDENCE FAILED\n";
                    return kNegative;
                }
                if (set.size() == bound.value && set.all_orthogonal()) {
                    std::cout << "MAXIMAL (complete: size attains the bound)\n";
                    return kOk;
                }
                std::cout << "NO CERTIFICATE (set below the bound)\n";
                return kNegative;
            }
            throw CLI::ValidationError("unknown certify method " + method);
        }

        if (classify->parsed()) {
            auto set = load_set(in_path);
            if (set.size() != 2 || set.symbol_count() != 2)
                throw CLI::ValidationError("classify-pair needs exactly two binary squares");
            auto prof = mofs::balance::pair_profile(set[0], set[1], r1, r2);
            std::cout << "psi(r1) = " << prof.psi1 << ", psi(r2) = " << prof.psi2 << "\n";
            std::cout << "A:\n";
            print_mat3(prof.a, std::cout);
            std::cout << "A':\n";
            for (const auto& row : prof.aprime) {
                for (long long v : row) std::cout << v << ' ';
                std::cout << '\n';
            }
            const int n = set.order();
            if (n % 4 == 0 && n >= 8) {
                auto label = mofs::balance::classify_exception(prof.a, n);
                std::cout << "exception: " << mofs::balance::to_string(label) << "\n";
                auto table = mofs::balance::classify_row_types(set[0], set[1]);
                const auto& tag = table.pair(r1, r2);
                if (tag.t != mofs::balance::TLabel::None)
                    std::cout << "T label: " << mofs::balance::to_string(tag.t) << " (reference row "
                              << tag.t_reference << ")\n";
            }
            if (auto w = mofs::balance::find_balancer(prof.a, prof.m, 0, 0)) {
                std::cout << "balancing witness:\n";
                print_mat3(w->b, std::cout);
                return kOk;
            }
            std::cout << "pair is not balanceable; nearby shifts:\n";
            for (int p = 0; p <= 1; ++p)
                for (int dq2 = -1; dq2 <= 1; ++dq2) {
                    if (p == 0 && dq2 <= 0) continue;
                    if (auto w = mofs::balance::find_balancer(prof.a, prof.m, p, dq2))
                        std::cout << "  (" << p << "," << dq2 << ")-balanceable\n";
                }
            return kNegative;
        }

        if (relations_cmd->parsed()) {
            auto set = load_set(in_path);
            auto space = mofs::relations::relation_space(set);
            std::cout << "relation space dimension " << space.dimension << "\n";
            auto jp = mofs::relations::find_jp_relations(set);
            if (!jp.complete) std::cerr << "enumeration bound hit; list may be partial\n";
            for (const auto& rel : jp.relations) {
                std::cout << "JP relation: X0 = {";
                bool first = true;
                for (int r : rel.rows) std::cout << (first ? "" : ",") << r, first = false;
                std::cout << "}, X1 = {";
                first = true;
                for (int c : rel.cols) std::cout << (first ? "" : ",") << c, first = false;
                std::cout << "}, symbols = (";
                for (std::size_t t = 0; t < rel.symbols.size(); ++t)
                    std::cout << (t ? "," : "") << *rel.symbols[t].begin();
                std::cout << ")\n";
            }
            std::cout << jp.relations.size() << " Jedwab-Popatia relation(s)\n";
            return kOk;
        }

        if (decomp->parsed()) {
            std::vector<long long> x;
            std::istringstream in(poly_x);
            std::string tok;
            while (std::getline(in, tok, ',')) x.push_back(std::stoll(tok));
            auto pieces = mofs::polytope::decompose(x, static_cast<int>(poly_m), poly_beta);
            for (const auto& piece : pieces) {
                for (std::size_t i = 0; i < piece.size(); ++i) std::cout << (i ? "," : "") << piece[i];
                std::cout << "\n";
            }
            return kOk;
        }

        if (census->parsed()) {
            auto count = mofs::exact::count_squares(census_n, census_m, budget);
            if (!count) {
                std::cout << "INDETERMINATE (budget)\n";
                return kBudget;
            }
            std::cout << "squares of type (" << census_n << ";" << census_n / census_m << "): " << *count
                      << "\n";
            if (census_mates) {
                long long bachelors = 0, seen = 0;
                bool hit_budget = false;
                mofs::exact::enumerate_squares(
                    census_n, census_m,
                    [&](const mofs::FrequencySquare& sq) {
                        auto res =
                            mofs::exact::find_mate(mofs::MofsSet(std::vector<mofs::FrequencySquare>{sq}), budget);
                        if (res.status == mofs::exact::MateStatus::NoneExists) ++bachelors;
                        if (res.status == mofs::exact::MateStatus::Indeterminate) hit_budget = true;
                        ++seen;
                        return !hit_budget;
                    },
                    budget);
                std::cout << "squares with no orthogonal mate: " << bachelors << " of " << seen << "\n";
                if (hit_budget) return kBudget;
            }
            return kOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
