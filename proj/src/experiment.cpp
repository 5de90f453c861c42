#include "deblur/experiment.hpp"

#include <initializer_list>
#include <map>
#include <string>
#include <utility>

#include <json.hpp>

#include "deblur/errors.hpp"
#include "deblur/io.hpp"
#include "deblur/spectral.hpp"

namespace deblur {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw config_error(path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(join(path, it.key()), "unknown field");
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
    const json* j = find(obj, key);
    if (!j) fail(join(path, key), "required field is missing");
    return *j;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

long as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Image as_image(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    Image values;
    values.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        values.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return values;
}

Kernel parse_kernel(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"builtin", "taps"});
    const json* builtin = find(j, "builtin");
    const json* taps = find(j, "taps");
    if (!!builtin == !!taps) fail(path, "exactly one of 'builtin' or 'taps' is required");
    if (builtin) {
        const std::string name = as_string(*builtin, join(path, "builtin"));
        if (name == "3bin") return kernel_3bin();
        if (name == "5bin") return kernel_5bin();
        fail(join(path, "builtin"), "expected \"3bin\" or \"5bin\"");
    }
    if (!taps->is_array() || taps->empty()) fail(join(path, "taps"), "expected a nonempty array");
    std::map<int, double> weights;
    for (std::size_t i = 0; i < taps->size(); ++i) {
        const std::string entry_path = join(path, "taps") + "[" + std::to_string(i) + "]";
        const json& entry = (*taps)[i];
        if (!entry.is_array() || entry.size() != 2) fail(entry_path, "expected [offset, weight]");
        const long offset = as_integer(entry[0], entry_path + "[0]");
        const double weight = as_number(entry[1], entry_path + "[1]");
        if (!weights.emplace(static_cast<int>(offset), weight).second)
            fail(entry_path, "duplicate offset");
    }
    try {
        return Kernel::from_taps(weights);
    } catch (const std::invalid_argument& e) {
        fail(join(path, "taps"), e.what());
    }
}

GeneratorDescriptor parse_generator(const json& j, const std::string& path) {
    require_object(j, path);
    const std::string type = as_string(require_field(j, "type", path), join(path, "type"));
    auto index_of = [&](const char* key) {
        const long v = as_integer(require_field(j, key, path), join(path, key));
        if (v < 0) fail(join(path, key), "must be >= 0");
        return static_cast<std::size_t>(v);
    };
    auto height_or_default = [&]() {
        const json* h = find(j, "height");
        return h ? as_number(*h, join(path, "height")) : 1.0;
    };
    if (type == "delta") {
        reject_unknown(j, path, {"type", "index", "height"});
        return GeneratorDescriptor::delta(index_of("index"), height_or_default());
    }
    if (type == "ramp") {
        reject_unknown(j, path, {"type", "start", "length", "height"});
        return GeneratorDescriptor::ramp(index_of("start"), index_of("length"),
                                         height_or_default());
    }
    if (type == "background_plus_delta") {
        reject_unknown(j, path, {"type", "background", "index", "bump"});
        const double background =
            as_number(require_field(j, "background", path), join(path, "background"));
        const double bump = as_number(require_field(j, "bump", path), join(path, "bump"));
        return GeneratorDescriptor::background_plus_delta(background, index_of("index"), bump);
    }
    if (type == "custom") {
        reject_unknown(j, path, {"type", "values"});
        return GeneratorDescriptor::custom(
            as_image(require_field(j, "values", path), join(path, "values")));
    }
    fail(join(path, "type"),
         "expected one of \"delta\", \"ramp\", \"background_plus_delta\", \"custom\"");
}

void parse_params(const json* j, ExperimentSpec& spec) {
    const std::string path = "params";
    if (j) require_object(*j, path);
    const json empty = json::object();
    const json& params = j ? *j : empty;
    switch (spec.method) {
        case Method::rl:
            reject_unknown(params, path, {});
            break;
        case Method::rl_reg: {
            reject_unknown(params, path, {"lambda"});
            const double lambda =
                as_number(require_field(params, "lambda", path), join(path, "lambda"));
            if (!(lambda >= 0.0) || lambda >= 1.0) fail(join(path, "lambda"), "must lie in [0, 1)");
            spec.rl_params.lambda = lambda;
            break;
        }
        case Method::lw: {
            reject_unknown(params, path, {"beta", "epsilon"});
            if (const json* beta = find(params, "beta")) {
                spec.lw_params.beta = as_number(*beta, join(path, "beta"));
                if (!(spec.lw_params.beta > 0.0)) fail(join(path, "beta"), "must be > 0");
            }
            if (const json* eps = find(params, "epsilon")) {
                spec.lw_params.epsilon = as_number(*eps, join(path, "epsilon"));
                if (!(spec.lw_params.epsilon >= 0.0)) fail(join(path, "epsilon"), "must be >= 0");
            }
            break;
        }
        case Method::tsvd: {
            reject_unknown(params, path, {"m"});
            const long m = as_integer(require_field(params, "m", path), join(path, "m"));
            if (m < 1) fail(join(path, "m"), "must be >= 1");
            spec.tsvd_m = static_cast<std::size_t>(m);
            break;
        }
    }
}

void parse_solver(const json* j, ExperimentSpec& spec) {
    if (!j) return;
    const std::string path = "solver";
    require_object(*j, path);
    reject_unknown(*j, path, {"max_iters", "conv_tol", "trace_every", "ratio_floor", "init"});
    if (const json* v = find(*j, "max_iters")) {
        spec.solver.max_iters = as_integer(*v, join(path, "max_iters"));
        if (spec.solver.max_iters < 1) fail(join(path, "max_iters"), "must be >= 1");
    }
    if (const json* v = find(*j, "conv_tol")) {
        spec.solver.conv_tol = as_number(*v, join(path, "conv_tol"));
        if (!(spec.solver.conv_tol >= 0.0)) fail(join(path, "conv_tol"), "must be >= 0");
    }
    if (const json* v = find(*j, "trace_every")) {
        spec.solver.trace_every = as_integer(*v, join(path, "trace_every"));
        if (spec.solver.trace_every < 1) fail(join(path, "trace_every"), "must be >= 1");
    }
    if (const json* v = find(*j, "ratio_floor")) {
        spec.solver.ratio_floor = as_number(*v, join(path, "ratio_floor"));
        if (!(spec.solver.ratio_floor > 0.0)) fail(join(path, "ratio_floor"), "must be > 0");
    }
    if (const json* v = find(*j, "init")) {
        const std::string init_path = join(path, "init");
        if (v->is_string()) {
            const std::string kind = v->get<std::string>();
            if (kind == "uniform")
                spec.solver.init = Init::uniform();
            else if (kind == "blurred")
                spec.solver.init = Init::blurred();
            else
                fail(init_path, "expected \"uniform\", \"blurred\", or an array of numbers");
        } else if (v->is_array()) {
            spec.solver.init = Init::custom(as_image(*v, init_path));
        } else {
            fail(init_path, "expected \"uniform\", \"blurred\", or an array of numbers");
        }
    }
}

std::vector<OutputRequest> parse_outputs(const json* j) {
    std::vector<OutputRequest> outputs;
    if (!j) return outputs;
    if (!j->is_array()) fail("outputs", "expected an array");
    for (std::size_t i = 0; i < j->size(); ++i) {
        const std::string path = "outputs[" + std::to_string(i) + "]";
        const json& entry = require_object((*j)[i], path);
        reject_unknown(entry, path, {"target", "path", "format"});
        OutputRequest request;
        const std::string target =
            as_string(require_field(entry, "target", path), join(path, "target"));
        if (target == "restored")
            request.target = OutputTarget::restored;
        else if (target == "trace")
            request.target = OutputTarget::trace;
        else if (target == "spectrum")
            request.target = OutputTarget::spectrum;
        else if (target == "coefficients")
            request.target = OutputTarget::coefficients;
        else if (target == "report")
            request.target = OutputTarget::report;
        else
            fail(join(path, "target"),
                 "expected one of \"restored\", \"trace\", \"spectrum\", \"coefficients\", "
                 "\"report\"");
        const std::string file = as_string(require_field(entry, "path", path), join(path, "path"));
        if (file.empty()) fail(join(path, "path"), "must be nonempty");
        request.path = file;
        if (const json* format = find(entry, "format")) {
            const std::string name = as_string(*format, join(path, "format"));
            if (name == "csv")
                request.format = OutputFormat::csv;
            else if (name == "json")
                request.format = OutputFormat::json;
            else
                fail(join(path, "format"), "expected \"csv\" or \"json\"");
        }
        outputs.push_back(std::move(request));
    }
    return outputs;
}

Method parse_method(const json& j) {
    const std::string name = as_string(j, "method");
    if (name == "rl") return Method::rl;
    if (name == "rl-reg") return Method::rl_reg;
    if (name == "lw") return Method::lw;
    if (name == "tsvd") return Method::tsvd;
    fail("method", "expected one of \"rl\", \"rl-reg\", \"lw\", \"tsvd\"");
}

}  // namespace

ExperimentSpec parse_experiment(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw config_error(std::string("spec: malformed JSON: ") + e.what());
    }
    require_object(root, "spec");
    reject_unknown(root, "", {"name", "n", "kernel", "original", "method", "params", "solver",
                              "outputs"});

    ExperimentSpec spec;
    spec.name = as_string(require_field(root, "name", ""), "name");
    if (spec.name.empty()) fail("name", "must be nonempty");
    const long n = as_integer(require_field(root, "n", ""), "n");
    if (n < 1) fail("n", "must be >= 1");
    spec.n = static_cast<std::size_t>(n);
    spec.kernel = parse_kernel(require_field(root, "kernel", ""), "kernel");
    spec.original = parse_generator(require_field(root, "original", ""), "original");
    spec.method = parse_method(require_field(root, "method", ""));
    parse_params(find(root, "params"), spec);
    parse_solver(find(root, "solver"), spec);
    spec.outputs = parse_outputs(find(root, "outputs"));

    // Realize the pieces once so structural problems surface as config errors
    // with context instead of failing deep inside a solver.
    try {
        circulant_matrix(spec.kernel, spec.n);
    } catch (const std::invalid_argument& e) {
        fail("kernel", e.what());
    }
    try {
        generate_image(spec.original, spec.n);
    } catch (const std::invalid_argument& e) {
        fail("original", e.what());
    }
    if (spec.method == Method::tsvd && spec.tsvd_m > spec.n) fail("params.m", "must be <= n");
    if (spec.solver.init.kind == Init::Kind::custom &&
        spec.solver.init.custom_values.size() != spec.n)
        fail("solver.init", "custom init length must equal n");
    return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
    return parse_experiment(read_file(path));
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    const Matrix transfer = circulant_matrix(spec.kernel, spec.n);
    ExperimentResult result;
    result.original = generate_image(spec.original, spec.n);
    result.blurred = blur(transfer, result.original);
    result.factorization = svd(transfer);
    switch (spec.method) {
        case Method::rl:
            result.run = rl_deblur(result.blurred, transfer, spec.solver);
            break;
        case Method::rl_reg:
            result.run = rl_regularized(result.blurred, transfer, spec.rl_params, spec.solver);
            break;
        case Method::lw:
            result.run = lw_deblur(result.blurred, transfer, spec.lw_params, spec.solver);
            break;
        case Method::tsvd: {
            TraceRow row;
            row.intensities = tsvd_deblur(result.blurred, result.factorization, spec.tsvd_m);
            result.run.restored = row.intensities;
            result.run.converged = true;
            result.run.trace.push_back(std::move(row));
            break;
        }
    }
    result.report = quality_report(result.run.restored, result.original, result.factorization);
    return result;
}

static std::vector<double> trace_coefficients(const TraceRow& row,
                                              const ExperimentResult& result) {
    if (row.coefficients) return *row.coefficients;
    return decompose(row.intensities, result.factorization, BasisSide::right).coeffs;
}

std::string render_output(const ExperimentSpec& spec, const ExperimentResult& result,
                          const OutputRequest& request) {
    (void)spec;
    const bool as_json = request.format == OutputFormat::json;
    const std::size_t n = result.original.size();
    switch (request.target) {
        case OutputTarget::restored: {
            if (as_json) {
                json rows = json::array();
                for (std::size_t i = 0; i < n; ++i)
                    rows.push_back({{"i", i},
                                    {"F", result.original[i]},
                                    {"g", result.blurred[i]},
                                    {"f", result.run.restored[i]}});
                return rows.dump(2) + "\n";
            }
            CsvTable table({"i", "F", "g", "f"});
            for (std::size_t i = 0; i < n; ++i)
                table.add_row({std::to_string(i), format_float(result.original[i]),
                               format_float(result.blurred[i]),
                               format_float(result.run.restored[i])});
            return table.to_string();
        }
        case OutputTarget::trace: {
            if (as_json) {
                json rows = json::array();
                for (const TraceRow& row : result.run.trace)
                    for (std::size_t i = 0; i < n; ++i)
                        rows.push_back(
                            {{"k", row.iteration}, {"i", i}, {"value", row.intensities[i]}});
                return rows.dump(2) + "\n";
            }
            CsvTable table({"k", "i", "value"});
            for (const TraceRow& row : result.run.trace)
                for (std::size_t i = 0; i < n; ++i)
                    table.add_row({std::to_string(row.iteration), std::to_string(i),
                                   format_float(row.intensities[i])});
            return table.to_string();
        }
        case OutputTarget::coefficients: {
            if (as_json) {
                json rows = json::array();
                for (const TraceRow& row : result.run.trace) {
                    const std::vector<double> coeffs = trace_coefficients(row, result);
                    for (std::size_t a = 0; a < n; ++a)
                        rows.push_back(
                            {{"k", row.iteration}, {"alpha", a}, {"value", coeffs[a]}});
                }
                return rows.dump(2) + "\n";
            }
            CsvTable table({"k", "alpha", "value"});
            for (const TraceRow& row : result.run.trace) {
                const std::vector<double> coeffs = trace_coefficients(row, result);
                for (std::size_t a = 0; a < n; ++a)
                    table.add_row({std::to_string(row.iteration), std::to_string(a),
                                   format_float(coeffs[a])});
            }
            return table.to_string();
        }
        case OutputTarget::spectrum: {
            if (as_json) {
                json rows = json::array();
                for (std::size_t a = 0; a < n; ++a)
                    rows.push_back({{"alpha", a}, {"sigma", result.factorization.sigma[a]}});
                return rows.dump(2) + "\n";
            }
            CsvTable table({"alpha", "sigma"});
            for (std::size_t a = 0; a < n; ++a)
                table.add_row({std::to_string(a), format_float(result.factorization.sigma[a])});
            return table.to_string();
        }
        case OutputTarget::report: {
            const QualityReport& r = result.report;
            if (as_json) {
                json obj = {{"l2_error", r.l2_error},
                            {"linf_error", r.linf_error},
                            {"nullspace_error", r.nullspace_error},
                            {"rowspace_error", r.rowspace_error},
                            {"negativity", r.negativity},
                            {"iterations", result.run.iterations_done},
                            {"converged", result.run.converged}};
                return obj.dump(2) + "\n";
            }
            CsvTable table({"metric", "value"});
            table.add_row({"l2_error", format_float(r.l2_error)});
            table.add_row({"linf_error", format_float(r.linf_error)});
            table.add_row({"nullspace_error", format_float(r.nullspace_error)});
            table.add_row({"rowspace_error", format_float(r.rowspace_error)});
            table.add_row({"negativity", format_float(r.negativity)});
            table.add_row({"iterations", std::to_string(result.run.iterations_done)});
            table.add_row({"converged", result.run.converged ? "1" : "0"});
            return table.to_string();
        }
    }
    throw std::invalid_argument("render_output: unknown target");
}

void run_and_emit(const ExperimentSpec& spec) {
    const ExperimentResult result = run_experiment(spec);
    for (const OutputRequest& request : spec.outputs)
        write_file_atomic(request.path, render_output(spec, result, request));
}

}  // namespace deblur
