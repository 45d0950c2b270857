#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"

#include "pql/cli.hpp"

namespace fs = std::filesystem;
using namespace pql;
using cli::Json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::complex<double> parse_complex(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

void emit(const Json& report, bool pretty) {
    if (pretty)
        std::cout << report.dump(2) << "\n";
    else
        std::cout << report.dump() << "\n";
}

int guarded(const std::function<int(Json&)>& run, bool pretty) {
    Json report;
    try {
        int rc = run(report);
        emit(report, pretty);
        return rc;
    } catch (const ParseError& e) {
        report["error"] = e.what();
        emit(report, pretty);
        return cli::ParseFailure;
    } catch (const UndeclaredSymbol& e) {
        report["error"] = e.what();
        emit(report, pretty);
        return cli::ParseFailure;
    } catch (const NonIntegerFamilyParameter& e) {
        report["error"] = e.what();
        emit(report, pretty);
        return cli::ParseFailure;
    } catch (const ShapeMismatch& e) {
        report["error"] = e.what();
        emit(report, pretty);
        return cli::ShapeFailure;
    } catch (const UnboundSymbol& e) {
        report["error"] = e.what();
        emit(report, pretty);
        return cli::NumericFailure;
    } catch (const std::exception& e) {
        report["error"] = e.what();
        emit(report, pretty);
        return cli::Failure;
    }
}

/// Run a per-file command over a directory of specs, optionally in parallel.
int run_batch(const std::string& dir, int jobs, bool pretty,
              const std::function<int(const std::string&, Json&)>& one) {
    std::vector<std::string> files;
    for (auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".spec")
            files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    std::vector<Json> results(files.size());
    std::vector<int> codes(files.size(), 0);
    std::mutex mu;
    size_t next = 0;
    auto worker = [&]() {
        while (true) {
            size_t i;
            {
                std::lock_guard<std::mutex> lk(mu);
                if (next >= files.size()) return;
                i = next++;
            }
            try {
                codes[i] = one(slurp(files[i]), results[i]);
            } catch (const std::exception& e) {
                results[i]["error"] = e.what();
                codes[i] = cli::Failure;
            }
            results[i]["input_file"] = files[i];
        }
    };
    jobs = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    Json all = Json::array();
    for (auto& r : results) all.push_back(r);
    emit(all, pretty);
    int rc = 0;
    for (int c : codes) rc = std::max(rc, c);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic-numeric analysis of planar quadratic ODE systems"};
    app.require_subcommand(1);
    app.fallthrough();  // allow global flags after the subcommand
    bool pretty = false;
    app.add_flag("--pretty", pretty, "indent the JSON output");

    bool extended = std::string(std::getenv("PQL_PRECISION") ? std::getenv("PQL_PRECISION") : "") ==
                    "extended";

    std::string specfile, family, Hexpr, trace_file;
    std::vector<std::string> assumes;
    std::string center_s = "0", base_s = "1", init_s = "0,0,0,0", from_s = "0", to_s = "1";
    double radius = 0.5, tol = 1e-10;
    int njobs = 1, nparam = 0, table = 1;

    auto* classify = app.add_subcommand("classify", "match the quadratic part against the catalog");
    classify->add_option("spec", specfile, "system spec file or directory")->required();
    classify->add_option("--jobs", njobs, "parallel workers for directories");

    auto* conditions =
        app.add_subcommand("conditions", "derive the family's necessary conditions");
    conditions->add_option("spec", specfile)->required();
    conditions->add_option("--family", family, "family label, e.g. VIII or IX.B(2)");
    conditions->add_option("--n", nparam, "family index when not inferable");

    auto* catalog = app.add_subcommand("catalog", "print the built-in normal forms");
    catalog->add_option("--table", table, "1 = normal forms, 2 = quadratic representatives");

    auto* integral = app.add_subcommand("integral-check", "verify a first integral");
    integral->add_option("spec", specfile)->required();
    integral->add_option("--H", Hexpr, "candidate first integral")->required();
    integral->add_option("--assume", assumes, "assumptions, e.g. f'=0 (repeatable)");

    auto* monodromy = app.add_subcommand("monodromy", "analytic continuation around a loop");
    monodromy->add_option("spec", specfile)->required();
    monodromy->add_option("--center", center_s, "loop center re[,im]")->required();
    monodromy->add_option("--radius", radius, "loop radius")->required();
    monodromy->add_option("--base", base_s, "base point re[,im]")->required();
    monodromy->add_option("--init", init_s, "initial state y_re,y_im,z_re,z_im")->required();
    monodromy->add_option("--tol", tol, "local error tolerance");
    monodromy->add_option("--trace", trace_file, "write accepted steps to a trace file");

    auto* equivalence = app.add_subcommand("equivalence", "check the family's birational map");
    equivalence->add_option("spec", specfile)->required();
    equivalence->add_option("--family", family);
    equivalence->add_option("--init", init_s, "initial state for the numeric residual");
    equivalence->add_option("--from", from_s, "path start re[,im]");
    equivalence->add_option("--to", to_s, "path end re[,im]");
    equivalence->add_option("--tol", tol);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) {
            if (fs::is_directory(specfile))
                return run_batch(specfile, njobs, pretty,
                                 [&](const std::string& in, Json& r) {
                                     return cli::cmd_classify(in, r);
                                 });
            return guarded([&](Json& r) { return cli::cmd_classify(slurp(specfile), r); }, pretty);
        }
        if (conditions->parsed()) {
            std::optional<int> n;
            if (conditions->count("--n")) n = nparam;
            return guarded(
                [&](Json& r) { return cli::cmd_conditions(slurp(specfile), family, n, r); },
                pretty);
        }
        if (catalog->parsed())
            return guarded([&](Json& r) { return cli::cmd_catalog(table, r); }, pretty);
        if (integral->parsed())
            return guarded(
                [&](Json& r) {
                    return cli::cmd_integral_check(slurp(specfile), Hexpr, assumes, r);
                },
                pretty);
        if (monodromy->parsed()) {
            cli::NumericArgs args;
            args.center = parse_complex(center_s);
            args.base = parse_complex(base_s);
            args.radius = radius;
            args.tol = tol;
            args.trace_file = trace_file;
            args.extended = extended;
            {
                std::istringstream ss(init_s);
                double a, b, c, d;
                char comma;
                ss >> a >> comma >> b >> comma >> c >> comma >> d;
                args.init = {std::complex<double>(a, b), std::complex<double>(c, d)};
            }
            return guarded([&](Json& r) { return cli::cmd_monodromy(slurp(specfile), args, r); },
                           pretty);
        }
        if (equivalence->parsed()) {
            cli::NumericArgs args;
            args.base = parse_complex(from_s);
            args.center = parse_complex(to_s);
            args.tol = tol;
            bool has_init = equivalence->count("--init") > 0;
            {
                std::istringstream ss(init_s);
                double a, b, c, d;
                char comma;
                ss >> a >> comma >> b >> comma >> c >> comma >> d;
                args.init = {std::complex<double>(a, b), std::complex<double>(c, d)};
            }
            return guarded(
                [&](Json& r) {
                    return cli::cmd_equivalence(slurp(specfile), family, args, has_init, r);
                },
                pretty);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::Failure;
    }
    return cli::Failure;
}
