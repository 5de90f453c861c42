#include "deblur/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deblur/errors.hpp"
#include "deblur/experiment.hpp"
#include "deblur/io.hpp"
#include "deblur/model.hpp"
#include "deblur/reproduce.hpp"
#include "deblur/solvers.hpp"
#include "deblur/spectral.hpp"

namespace deblur {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument(what + ": not a number: '" + s + "'");
    return v;
}

std::size_t parse_index(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not an index: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument(what + ": not an index: '" + s + "'");
    return static_cast<std::size_t>(v);
}

Kernel kernel_by_name(const std::string& name) {
    if (name == "3bin") return kernel_3bin();
    if (name == "5bin") return kernel_5bin();
    if (name == "identity") return kernel_identity();
    throw std::invalid_argument("--kernel: expected 3bin, 5bin, or identity");
}

std::string image_csv(const Image& image) {
    CsvTable table({"i", "value"});
    for (std::size_t i = 0; i < image.size(); ++i)
        table.add_row({std::to_string(i), format_float(image[i])});
    return table.to_string();
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file_atomic(out_path, content);
}

Init parse_init(const std::string& arg, std::size_t n) {
    if (arg == "uniform") return Init::uniform();
    if (arg == "blurred") return Init::blurred();
    return Init::custom(parse_image_argument(arg, n));
}

struct DeblurOptions {
    std::string method;
    double lambda = 0.0;
    double beta = 1.0;
    double epsilon = 0.0;
    long m = 0;
    long iters = 100000;
    double tol = 1e-12;
    std::string init = "uniform";
};

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"1D cyclic image blurring and iterative deblurring"};
    app.require_subcommand(1);

    std::string kernel_name = "5bin";
    long n = 12;
    std::string image_arg;
    std::string out_path;

    auto add_common = [&](CLI::App* cmd, bool needs_image) {
        cmd->add_option("--kernel", kernel_name, "Blurring kernel: 3bin, 5bin, or identity")
            ->capture_default_str();
        cmd->add_option("--n", n, "Number of pixels")->capture_default_str();
        if (needs_image)
            cmd->add_option("--image", image_arg,
                            "Image: delta:I, ramp:S:L, bgdelta:BG:I:BUMP, uniform:V, or @file")
                ->required();
        cmd->add_option("--out", out_path, "Output CSV path (stdout when omitted)");
    };

    CLI::App* blur_cmd = app.add_subcommand("blur", "Blur an image with a cyclic kernel");
    add_common(blur_cmd, true);

    CLI::App* deblur_cmd = app.add_subcommand("deblur", "Restore an image from a blurred one");
    add_common(deblur_cmd, true);
    DeblurOptions opt;
    deblur_cmd->add_option("--method", opt.method, "rl | rl-reg | lw | tsvd")->required();
    deblur_cmd->add_option("--lambda", opt.lambda, "Regularization strength (rl-reg)");
    deblur_cmd->add_option("--beta", opt.beta, "Step size (lw)")->capture_default_str();
    deblur_cmd->add_option("--epsilon", opt.epsilon, "Damping (lw)")->capture_default_str();
    deblur_cmd->add_option("--m", opt.m, "Kept singular directions (tsvd)");
    deblur_cmd->add_option("--iters", opt.iters, "Iteration budget")->capture_default_str();
    deblur_cmd->add_option("--tol", opt.tol, "Convergence tolerance on the max pixel change")
        ->capture_default_str();
    deblur_cmd->add_option("--init", opt.init, "uniform | blurred | image spec")
        ->capture_default_str();

    CLI::App* svd_cmd = app.add_subcommand("svd", "Factor the transfer matrix");
    std::string left_out, right_out;
    add_common(svd_cmd, false);
    svd_cmd->add_option("--left-out", left_out, "CSV path for left singular vectors");
    svd_cmd->add_option("--right-out", right_out, "CSV path for right singular vectors");

    CLI::App* run_cmd = app.add_subcommand("run", "Execute a JSON experiment spec");
    std::string spec_path;
    run_cmd->add_option("spec", spec_path, "Path to the experiment JSON")->required();

    CLI::App* repro_cmd =
        app.add_subcommand("reproduce", "Run the bundled study suite with golden checks");
    std::string only_case;
    std::string outdir = "reproduce_out";
    repro_cmd->add_option("--case", only_case, "Run a single case (table1, table2, fig5, ...)");
    repro_cmd->add_option("--outdir", outdir, "Directory for emitted CSV files")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (blur_cmd->parsed()) {
        if (n < 1) throw std::invalid_argument("--n: must be >= 1");
        const Matrix transfer = circulant_matrix(kernel_by_name(kernel_name),
                                                 static_cast<std::size_t>(n));
        const Image original = parse_image_argument(image_arg, static_cast<std::size_t>(n));
        emit(image_csv(blur(transfer, original)), out_path);
        return 0;
    }

    if (deblur_cmd->parsed()) {
        if (n < 1) throw std::invalid_argument("--n: must be >= 1");
        const std::size_t size = static_cast<std::size_t>(n);
        const Matrix transfer = circulant_matrix(kernel_by_name(kernel_name), size);
        const Image blurred = parse_image_argument(image_arg, size);

        auto reject_flag = [&](const char* flag, const std::string& for_method) {
            if (deblur_cmd->count(flag))
                throw std::invalid_argument(std::string(flag) + ": only valid with --method " +
                                            for_method);
        };
        SolverConfig config;
        config.max_iters = opt.iters;
        config.conv_tol = opt.tol;
        config.trace_every = opt.iters < 1 ? 1 : opt.iters;  // endpoints only
        config.init = parse_init(opt.init, size);

        Image restored;
        if (opt.method == "rl") {
            reject_flag("--lambda", "rl-reg");
            reject_flag("--beta", "lw");
            reject_flag("--epsilon", "lw");
            reject_flag("--m", "tsvd");
            restored = rl_deblur(blurred, transfer, config).restored;
        } else if (opt.method == "rl-reg") {
            reject_flag("--beta", "lw");
            reject_flag("--epsilon", "lw");
            reject_flag("--m", "tsvd");
            restored = rl_regularized(blurred, transfer, {opt.lambda}, config).restored;
        } else if (opt.method == "lw") {
            reject_flag("--lambda", "rl-reg");
            reject_flag("--m", "tsvd");
            restored = lw_deblur(blurred, transfer, {opt.beta, opt.epsilon}, config).restored;
        } else if (opt.method == "tsvd") {
            reject_flag("--lambda", "rl-reg");
            reject_flag("--beta", "lw");
            reject_flag("--epsilon", "lw");
            if (!deblur_cmd->count("--m"))
                throw std::invalid_argument("--m: required with --method tsvd");
            if (opt.m < 1) throw std::invalid_argument("--m: must be >= 1");
            restored = tsvd_deblur(blurred, svd(transfer), static_cast<std::size_t>(opt.m));
        } else {
            throw std::invalid_argument("--method: expected rl, rl-reg, lw, or tsvd");
        }
        emit(image_csv(restored), out_path);
        return 0;
    }

    if (svd_cmd->parsed()) {
        if (n < 1) throw std::invalid_argument("--n: must be >= 1");
        const std::size_t size = static_cast<std::size_t>(n);
        const Matrix transfer = circulant_matrix(kernel_by_name(kernel_name), size);
        const SvdFactorization factorization = svd(transfer);

        CsvTable spectrum({"alpha", "sigma"});
        for (std::size_t a = 0; a < size; ++a)
            spectrum.add_row({std::to_string(a), format_float(factorization.sigma[a])});
        emit(spectrum.to_string(), out_path);

        auto write_vectors = [&](const std::string& path, bool left) {
            if (path.empty()) return;
            CsvTable table({"alpha", "i", "value"});
            for (std::size_t a = 0; a < size; ++a) {
                const Image v =
                    left ? factorization.left_vector(a) : factorization.right_vector(a);
                for (std::size_t i = 0; i < size; ++i)
                    table.add_row(
                        {std::to_string(a), std::to_string(i), format_float(v[i])});
            }
            write_file_atomic(path, table.to_string());
        };
        write_vectors(left_out, true);
        write_vectors(right_out, false);
        return 0;
    }

    if (run_cmd->parsed()) {
        const ExperimentSpec spec = load_experiment(spec_path);
        run_and_emit(spec);
        std::cout << "ok: " << spec.name << "\n";
        return 0;
    }

    if (repro_cmd->parsed()) {
        const bool all_passed = reproduce_suite(only_case, outdir, std::cout);
        return all_passed ? 0 : 1;
    }

    return 2;
}

}  // namespace

Image parse_image_argument(const std::string& arg, std::size_t n) {
    if (arg.empty()) throw std::invalid_argument("image: empty argument");
    if (arg[0] == '@') {
        const Image values = read_image_file(arg.substr(1));
        if (n > 0 && values.size() != n)
            throw std::invalid_argument("image: file holds " + std::to_string(values.size()) +
                                        " pixels, expected " + std::to_string(n));
        return values;
    }
    if (n == 0) throw std::invalid_argument("image: inline forms need --n");
    const std::vector<std::string> parts = split(arg, ':');
    const std::string& head = parts[0];
    if (head == "delta" && parts.size() == 2)
        return generate_image(GeneratorDescriptor::delta(parse_index(parts[1], "delta"), 1.0), n);
    if (head == "ramp" && parts.size() == 3)
        return generate_image(GeneratorDescriptor::ramp(parse_index(parts[1], "ramp"),
                                                        parse_index(parts[2], "ramp"), 1.0),
                              n);
    if (head == "bgdelta" && parts.size() == 4)
        return generate_image(
            GeneratorDescriptor::background_plus_delta(parse_double(parts[1], "bgdelta"),
                                                       parse_index(parts[2], "bgdelta"),
                                                       parse_double(parts[3], "bgdelta")),
            n);
    if (head == "uniform" && parts.size() == 2)
        return generate_image(
            GeneratorDescriptor::custom(Image(n, parse_double(parts[1], "uniform"))), n);
    throw std::invalid_argument(
        "image: expected delta:I, ramp:S:L, bgdelta:BG:I:BUMP, uniform:V, or @file, got '" +
        arg + "'");
}

int cli_main(int argc, const char* const* argv) {
    try {
        return run_cli(argc, argv);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace deblur
