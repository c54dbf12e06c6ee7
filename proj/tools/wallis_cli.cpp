// wallis: tables, series coefficients, convergence rates and inequality
// certificates for the Wallis ratio.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wallis/cli/commands.hpp"

namespace {

using namespace wallis;
using namespace wallis::cli;

struct CommonFlags {
    std::string format = "json";
    std::string out_path;
    unsigned precision_bits = 128;
    unsigned precision_cap = 8192;
};

void add_common(CLI::App* sub, CommonFlags& flags, unsigned default_bits)
{
    flags.precision_bits = default_bits;
    sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--out", flags.out_path, "Write output to this path instead of stdout");
    sub->add_option("--precision-bits", flags.precision_bits, "Initial working precision in bits")
        ->check(CLI::Range(16u, 1u << 20))
        ->capture_default_str();
    sub->add_option("--precision-cap", flags.precision_cap, "Largest precision tried before giving up")
        ->check(CLI::Range(16u, 1u << 20))
        ->capture_default_str();
}

int emit(const OutputRecord& record, const CommonFlags& flags)
{
    const std::string text = flags.format == "csv" ? render_csv(record) : render_json(record);
    if (flags.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(flags.out_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open " << flags.out_path << " for writing\n";
            return kUsage;
        }
        f << text;
    }
    return record.exit_code;
}

PrecisionPolicy policy_of(const CommonFlags& flags)
{
    if (flags.precision_cap < flags.precision_bits) {
        throw UsageError("--precision-cap must be >= --precision-bits");
    }
    return {flags.precision_bits, flags.precision_cap};
}

std::vector<ExactRational> parse_rationals(const std::vector<std::string>& items)
{
    std::vector<ExactRational> out;
    for (const auto& s : items) {
        try {
            out.push_back(ExactRational::parse(s));
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

std::vector<ApproximantSpec> rate_candidates(const std::string& family, const std::vector<std::string>& a_values,
                                             const std::vector<std::string>& bc_values,
                                             const std::vector<std::string>& coeffs)
{
    std::vector<ApproximantSpec> out;
    if (family == "chi") {
        out.emplace_back(family::Chi{});
    } else if (family == "mu") {
        out.emplace_back(family::Mu{});
    } else if (family == "a") {
        if (a_values.empty()) {
            throw UsageError("rate --family a needs --a");
        }
        for (auto& a : parse_rationals(a_values)) {
            out.emplace_back(family::A{a});
        }
    } else if (family == "bc") {
        if (bc_values.empty()) {
            throw UsageError("rate --family bc needs --bc b:c");
        }
        for (const auto& pair : bc_values) {
            const auto colon = pair.find(':');
            if (colon == std::string::npos) {
                throw UsageError("--bc expects b:c, got '" + pair + "'");
            }
            auto bc = parse_rationals({pair.substr(0, colon), pair.substr(colon + 1)});
            out.emplace_back(family::BC{bc[0], bc[1]});
        }
    } else if (family == "corrected") {
        if (coeffs.empty()) {
            throw UsageError("rate --family corrected needs --coeffs");
        }
        out.emplace_back(family::Corrected{
            SeriesCoefficients(parse_rationals(coeffs), SeriesCoefficients::Source::Supplied)});
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Wallis ratio approximation toolkit"};
    app.require_subcommand(1);

    CommonFlags table_flags;
    std::vector<std::uint64_t> table_ns = default_table_ns();
    auto* table = app.add_subcommand("table", "W_n - chi_n and W_n - mu_n to five certified digits");
    table->add_option("-n,--n", table_ns, "Values of n (>= 2)")->delimiter(',')->capture_default_str();
    add_common(table, table_flags, 128);

    CommonFlags coeffs_flags;
    unsigned long max_index = 6;
    auto* coeffs = app.add_subcommand("coeffs", "Exact x_k and correction coefficients a_k");
    coeffs->add_option("-K,--K", max_index, "Highest x index")->capture_default_str();
    add_common(coeffs, coeffs_flags, 128);

    CommonFlags verify_flags;
    std::string which = "all";
    std::uint64_t n_min = 0;
    std::uint64_t n_max = kDefaultSweepMax;
    bool per_n = false;
    unsigned workers = 0;
    auto* verify = app.add_subcommand("verify", "Certify inequalities over a range of n");
    verify->add_option("inequality", which, "U_LOWER, U_UPPER, THM3, THM5_LOWER, THM5_UPPER or all")
        ->capture_default_str();
    auto* n_min_opt = verify->add_option("--n-min", n_min, "First n (default: the inequality's minimum)");
    verify->add_option("--n-max", n_max, "Last n")->capture_default_str();
    verify->add_flag("--per-n", per_n, "One row per n");
    verify->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
    add_common(verify, verify_flags, 128);

    CommonFlags rate_flags;
    std::string family_name = "a";
    std::vector<std::string> a_values;
    std::vector<std::string> bc_values;
    std::vector<std::string> coeff_values;
    unsigned k = 2;
    unsigned max_order = 5;
    std::vector<std::uint64_t> grid = default_rate_grid();
    auto* rate = app.add_subcommand("rate", "Convergence-rate limits of residual sequences");
    rate->add_option("--family", family_name, "chi, a, mu, bc or corrected")
        ->check(CLI::IsMember({"chi", "a", "mu", "bc", "corrected"}))
        ->capture_default_str();
    rate->add_option("--a", a_values, "Parameter(s) a, e.g. -1,0,1/2")->delimiter(',');
    rate->add_option("--bc", bc_values, "Parameter pair(s) b:c, e.g. 1/3:1/3,0:0")->delimiter(',');
    rate->add_option("--coeffs", coeff_values, "Correction coefficients a_1,a_2,...")->delimiter(',');
    rate->add_option("-k,--k", k, "Order k")->capture_default_str();
    rate->add_option("--grid", grid, "Increasing grid of n")->delimiter(',')->capture_default_str();
    rate->add_option("--max-order", max_order, "Highest order probed when ranking")->capture_default_str();
    add_common(rate, rate_flags, 512);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*table) {
            return emit(cmd_table(table_ns, policy_of(table_flags)), table_flags);
        }
        if (*coeffs) {
            return emit(cmd_coeffs(max_index), coeffs_flags);
        }
        if (*verify) {
            VerifyOptions opt;
            if (which != "all") {
                const auto id = parse_inequality(which);
                if (!id) {
                    throw UsageError("unknown inequality '" + which + "'");
                }
                opt.ids = {*id};
            }
            if (n_min_opt->count() > 0) {
                opt.n_min = n_min;
            }
            opt.n_max = n_max;
            opt.policy = policy_of(verify_flags);
            opt.per_n = per_n;
            opt.workers = workers;
            return emit(cmd_verify(opt), verify_flags);
        }
        if (*rate) {
            RateOptions opt;
            opt.candidates = rate_candidates(family_name, a_values, bc_values, coeff_values);
            opt.k = k;
            opt.grid = grid;
            opt.precision_bits = rate_flags.precision_bits;
            opt.max_order = max_order;
            const OutputRecord record = cmd_rate(opt);
            if (record.summary.contains("diagnostics")) {
                for (const auto& d : record.summary["diagnostics"]) {
                    std::cerr << d.get<std::string>() << '\n';
                }
            }
            return emit(record, rate_flags);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
