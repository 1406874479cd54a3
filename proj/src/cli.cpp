#include "pptsep/cli.hpp"

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "pptsep/decompose.hpp"
#include "pptsep/instance_gen.hpp"
#include "pptsep/io.hpp"
#include "pptsep/ppt.hpp"

namespace pptsep::cli {

namespace {

using io::Json;

bool is_input_error(const Error &e) {
    const auto n = e.name();
    return n == "FormatError" || n == "InvalidState" || n == "NotHermitianError" || n == "DimensionMismatch" ||
           n == "PreconditionError" || n == "NormalizationError" || n == "IndexError";
}

int input_error(std::ostream &err, const std::string &what) {
    err << "error: " << what << '\n';
    return kInputError;
}

TripartiteState load_state(const std::string &path, bool allow_unnormalized) {
    StateOptions opts;
    opts.allow_unnormalized = allow_unnormalized;
    return io::state_from_json(io::read_json_file(path), opts);
}

std::string truth_path_for(const std::string &out) {
    const std::string ext = ".json";
    if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
        return out.substr(0, out.size() - ext.size()) + ".truth.json";
    return out + ".truth.json";
}

struct CheckPptArgs {
    std::string file;
    double tol = -1.0;
    bool allow_unnormalized = false;
};

int cmd_check_ppt(const CheckPptArgs &a, std::ostream &out, std::ostream &err) {
    try {
        const auto state = load_state(a.file, a.allow_unnormalized);
        const auto report = ppt_report(state, a.tol >= 0.0 ? std::optional<double>(a.tol) : std::nullopt);
        out << io::dump(io::ppt_report_to_json(report));
        if (!report.overall_ppt) err << "state is not PPT\n";
        return report.overall_ppt ? kSuccess : kNegative;
    } catch (const Error &e) {
        return input_error(err, std::string(e.name()) + ": " + e.what());
    }
}

struct DecomposeArgs {
    std::string file;
    double tol = 1e-8;
    std::string witness = "search";
    int samples = 256;
    std::uint64_t seed = 0;
    std::string eA;
    std::string fB;
    std::string out;
    bool allow_unnormalized = false;
};

int cmd_decompose(const DecomposeArgs &a, std::ostream &out, std::ostream &err) {
    std::optional<TripartiteState> state;
    DecomposeOptions opts;
    opts.tol = a.tol;
    opts.seed = a.seed;
    try {
        state.emplace(load_state(a.file, a.allow_unnormalized));
        if (a.witness == "corner") {
            opts.witness = CornerSearch{};
        } else if (a.witness == "search") {
            opts.witness = RandomSearch{a.samples, a.seed};
        } else {
            if (a.eA.empty() || a.fB.empty()) return input_error(err, "--witness explicit needs --eA and --fB");
            opts.witness = ExplicitWitness{io::vector_from_json(io::parse(a.eA), state->dims().K),
                                           io::vector_from_json(io::parse(a.fB), state->dims().M)};
        }
    } catch (const Error &e) {
        return input_error(err, std::string(e.name()) + ": " + e.what());
    }

    try {
        const auto result = decompose(*state, opts);
        double total = 0.0;
        for (const auto &t : result.ensemble.terms) total += t.p;

        Json summary;
        summary["status"] = "certified";
        summary["terms"] = result.ensemble.terms.size();
        summary["residual"] = result.residual;
        summary["weight_sum"] = total;
        summary["witness"] = {{"eA", io::vector_to_json(result.witness.eA)},
                              {"fB", io::vector_to_json(result.witness.fB)},
                              {"sandwich_rank", result.witness.sandwich_rank}};
        summary["diagnostics"] = io::diagnostics_to_json(result.diagnostics);
        if (!a.out.empty()) {
            io::write_text_file(a.out, io::dump(io::ensemble_to_json(result.ensemble)));
            summary["out"] = a.out;
        } else {
            summary["ensemble"] = io::ensemble_to_json(result.ensemble);
        }
        out << io::dump(summary);
        err << "certified separable: " << result.ensemble.terms.size() << " product terms, residual "
            << result.residual << '\n';
        return kSuccess;
    } catch (const Error &e) {
        if (is_input_error(e)) return input_error(err, std::string(e.name()) + ": " + e.what());
        Json failure;
        failure["status"] = "precondition_failure";
        failure["error"] = std::string(e.name());
        failure["message"] = e.what();
        out << io::dump(failure);
        err << e.name() << ": " << e.what() << '\n';
        return kPrecondition;
    }
}

struct GenerateArgs {
    std::string kind;
    std::vector<int> dims;
    std::uint64_t seed = 0;
    std::optional<double> a;
    std::string variant = "corrected";
    double p = 0.0;
    std::string npt_state = "random";
    double scale = 1.0;
    double cond_cap = 100.0;
    std::string out;
};

int cmd_generate(const GenerateArgs &g, std::ostream &out, std::ostream &err) {
    const auto dims_given = !g.dims.empty();
    std::optional<TripartiteDims> dims;
    if (dims_given) dims = TripartiteDims{g.dims[0], g.dims[1], g.dims[2]};

    try {
        io::Metadata meta{{"kind", g.kind}};
        Json summary;
        summary["status"] = "ok";
        summary["kind"] = g.kind;

        auto require_dims = [&]() -> const TripartiteDims & {
            if (!dims) throw PreconditionError("--kind " + g.kind + " needs --dims K M N");
            return *dims;
        };
        auto require_qubits = [&] {
            if (dims && !(*dims == TripartiteDims{2, 2, 2}))
                throw PreconditionError("--kind " + g.kind + " is defined on 2x2x2 only");
        };

        if (g.kind == "canonical") {
            GenSpec spec{require_dims(), g.seed, g.scale, g.cond_cap};
            const auto gen = gen_canonical_state(spec);
            meta["seed"] = std::to_string(g.seed);
            const auto truth_path = truth_path_for(g.out);
            io::write_text_file(g.out, io::dump(io::state_to_json(gen.state, meta)));
            io::write_text_file(truth_path, io::dump(io::canonical_to_json(gen.truth)));
            summary["truth"] = truth_path;
        } else if (g.kind == "example-i") {
            io::write_text_file(g.out, io::dump(io::state_to_json(example_i(require_dims()), meta)));
        } else if (g.kind == "example-ii") {
            require_qubits();
            if (!g.a) throw PreconditionError("--kind example-ii needs --a");
            meta["a"] = io::format_double(*g.a);
            io::write_text_file(g.out, io::dump(io::state_to_json(example_ii(*g.a), meta)));
        } else if (g.kind == "example-iii") {
            require_qubits();
            ExampleIiiVariant variant;
            if (g.variant == "corrected")
                variant = ExampleIiiVariant::Corrected;
            else if (g.variant == "literal")
                variant = ExampleIiiVariant::Literal;
            else
                throw PreconditionError("--variant must be corrected or literal");
            meta["variant"] = g.variant;
            io::write_text_file(g.out, io::dump(io::state_to_json(example_iii(variant), meta)));
        } else if (g.kind == "npt") {
            NptKind kind;
            if (g.npt_state == "random")
                kind = NptKind::RandomPure;
            else if (g.npt_state == "ghz")
                kind = NptKind::Ghz;
            else
                throw PreconditionError("--state must be random or ghz");
            meta["seed"] = std::to_string(g.seed);
            meta["p"] = io::format_double(g.p);
            meta["state"] = g.npt_state;
            io::write_text_file(g.out, io::dump(io::state_to_json(gen_npt_control(require_dims(), g.p, g.seed, kind), meta)));
        } else {
            throw PreconditionError("unknown --kind " + g.kind);
        }
        summary["out"] = g.out;
        out << io::dump(summary);
        return kSuccess;
    } catch (const Error &e) {
        return input_error(err, std::string(e.name()) + ": " + e.what());
    }
}

struct VerifyArgs {
    std::string state_file;
    std::string ensemble_file;
    double tol = 1e-8;
    bool allow_unnormalized = false;
};

int cmd_verify(const VerifyArgs &a, std::ostream &out, std::ostream &err) {
    try {
        const auto state = load_state(a.state_file, a.allow_unnormalized);
        const auto ens = io::ensemble_from_json(io::read_json_file(a.ensemble_file));
        const auto check = verify_ensemble(state, ens, a.tol);
        Json j;
        j["residual"] = check.residual;
        j["tol"] = a.tol;
        j["pass"] = check.pass;
        j["violations"] = check.violations;
        out << io::dump(j);
        for (const auto &v : check.violations) err << "invariant violated: " << v << '\n';
        if (!check.pass) err << "ensemble does not reproduce the state (residual " << check.residual << ")\n";
        return check.pass ? kSuccess : kNegative;
    } catch (const Error &e) {
        return input_error(err, std::string(e.name()) + ": " + e.what());
    }
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Separability certificates for rank-N PPT states on C^K x C^M x C^N", "pptsep"};
    app.require_subcommand(1);

    CheckPptArgs check;
    auto *check_cmd = app.add_subcommand("check-ppt", "Positivity of every partial transpose");
    check_cmd->add_option("file", check.file, "StateFile (JSON)")->required();
    check_cmd->add_option("--tol", check.tol, "eigenvalue slack (default 1e-9 * trace)");
    check_cmd->add_flag("--allow-unnormalized", check.allow_unnormalized, "rescale a non-unit trace");

    DecomposeArgs dec;
    auto *dec_cmd = app.add_subcommand("decompose", "Certified separable decomposition");
    dec_cmd->add_option("file", dec.file, "StateFile (JSON)")->required();
    dec_cmd->add_option("--tol", dec.tol, "certification tolerance on the relative residual");
    dec_cmd->add_option("--witness", dec.witness, "witness search")->check(CLI::IsMember({"corner", "search", "explicit"}));
    dec_cmd->add_option("--samples", dec.samples, "random product pairs tried by --witness search");
    dec_cmd->add_option("--seed", dec.seed, "seed for witness search and diagonalization");
    dec_cmd->add_option("--eA", dec.eA, "explicit witness on A, JSON [[re,im],...]");
    dec_cmd->add_option("--fB", dec.fB, "explicit witness on B, JSON [[re,im],...]");
    dec_cmd->add_option("--out", dec.out, "EnsembleFile to write");
    dec_cmd->add_flag("--allow-unnormalized", dec.allow_unnormalized, "rescale a non-unit trace");

    GenerateArgs gen;
    auto *gen_cmd = app.add_subcommand("generate", "Write a test state");
    gen_cmd->add_option("--kind", gen.kind, "instance kind")
        ->required()
        ->check(CLI::IsMember({"canonical", "example-i", "example-ii", "example-iii", "npt"}));
    gen_cmd->add_option("--dims", gen.dims, "K M N")->expected(3);
    gen_cmd->add_option("--seed", gen.seed, "random seed");
    gen_cmd->add_option("--a", gen.a, "off-diagonal entry for example-ii");
    gen_cmd->add_option("--variant", gen.variant, "example-iii vector set: corrected or literal");
    gen_cmd->add_option("--p", gen.p, "white-noise weight for npt")->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--state", gen.npt_state, "pure state for npt: random or ghz");
    gen_cmd->add_option("--scale", gen.scale, "generator eigenvalue scale for canonical");
    gen_cmd->add_option("--cond-cap", gen.cond_cap, "condition number cap of F for canonical");
    gen_cmd->add_option("--out", gen.out, "StateFile to write")->required();

    VerifyArgs ver;
    auto *ver_cmd = app.add_subcommand("verify", "Check an ensemble against a state");
    ver_cmd->add_option("state", ver.state_file, "StateFile (JSON)")->required();
    ver_cmd->add_option("ensemble", ver.ensemble_file, "EnsembleFile (JSON)")->required();
    ver_cmd->add_option("--tol", ver.tol, "tolerance on the relative residual");
    ver_cmd->add_flag("--allow-unnormalized", ver.allow_unnormalized, "rescale a non-unit trace");

    std::vector<std::string> argv_store{"pptsep"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        err << app.help();
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    if (*check_cmd) return cmd_check_ppt(check, out, err);
    if (*dec_cmd) return cmd_decompose(dec, out, err);
    if (*gen_cmd) return cmd_generate(gen, out, err);
    return cmd_verify(ver, out, err);
}

}  // namespace pptsep::cli
