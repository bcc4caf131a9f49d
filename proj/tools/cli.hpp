// cli.hpp -- `gfst` command line: compile, run, check and export machines.
//
// Exit codes: 0 ok, 1 expression syntax, 2 construction ambiguity, 3 coloring
// violation, 4 I/O or file format, 5 ambiguity while running, 6 weight
// conflicts, 64 bad command line.

#ifndef GFST_TOOLS_CLI_HPP
#define GFST_TOOLS_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <gfst/gfst.hpp>

namespace gfst::cli {

enum Exit : int {
    kOk = 0,
    kSyntax = 1,
    kAmbiguity = 2,
    kColoring = 3,
    kIo = 4,
    kRuntimeAmbiguity = 5,
    kConflicts = 6,
    kUsage = 64,
};

inline constexpr std::string_view kReject = "<<REJECT>>";
inline constexpr std::string_view kAmbiguous = "<<AMBIGUOUS>>";

struct IoError : Error {
    using Error::Error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read '" + path + "'");
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create '" + path + "'");
    out << data;
    out.flush();
    if (!out) throw IoError("cannot write '" + path + "'");
}

inline void print_witnesses(std::ostream& os, const std::vector<ConflictWitness>& ws) {
    for (const auto& w : ws) os << "  conflict: " << describe(w) << "\n";
}

inline void print_violations(std::ostream& os, const ColoringReport& rep) {
    for (const auto& v : rep.violations) os << "  violation: " << v.message << "\n";
}

struct CompileOptions {
    std::string input;
    std::string spec;
    std::string policy = "max";
    bool strict = false;
    std::string output;
};

inline int cmd_compile(const CompileOptions& o, std::ostream& out, std::ostream& err) {
    std::string text;
    std::optional<InterleaveSpec> spec;
    try {
        text = read_file(o.input);
        if (!o.spec.empty()) spec = parse_interleave_spec(read_file(o.spec));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    }

    AstPtr expr;
    try {
        expr = parse(text);
    } catch (const SyntaxError& e) {
        err << o.input << ":" << e.what() << "\n";
        return kSyntax;
    }

    Transducer t;
    try {
        t = compile(expr, parse_policy(o.policy));
    } catch (const Error& e) {
        err << o.input << ": " << e.what() << "\n";
        return kAmbiguity;
    }

    if (spec) {
        auto rep = check_coloring(t, *spec);
        if (!rep.ok()) {
            err << o.input << ": expression does not respect the interleaved alphabets\n";
            print_violations(err, rep);
            return kColoring;
        }
        t.colors = rep.colors;
    }

    auto verdict = is_functional(t);
    if (!verdict.certified) {
        err << (o.strict ? "error: " : "warning: ") << verdict.witnesses.size()
            << " weight conflict(s); add weight annotations to disambiguate\n";
        print_witnesses(err, verdict.witnesses);
        if (o.strict) return kConflicts;
    }

    try {
        write_file(o.output, save_artifact(t));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    }
    out << "compiled " << t.state_count << " states, " << t.transitions.size() << " transitions\n";
    return kOk;
}

inline std::optional<Transducer> load_or_report(const std::string& path, std::ostream& err) {
    try {
        return load_artifact(read_file(path));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return std::nullopt;
    }
}

struct RunOptions {
    std::string artifact;
    std::optional<std::string> input;
    bool stdin_lines = false;
};

inline int cmd_run(const RunOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
    auto t = load_or_report(o.artifact, err);
    if (!t) return kIo;
    Evaluator ev(*t);
    int status = kOk;
    auto run_one = [&](const std::string& line) {
        std::u32string input;
        try {
            input = decode_utf8(line);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            out << kReject << "\n";
            if (status == kOk) status = kIo;
            return;
        }
        try {
            auto result = ev.evaluate(input);
            if (result) out << quote_literal(*result) << "\n";
            else out << kReject << "\n";
        } catch (const RuntimeAmbiguity& e) {
            err << "error: " << e.what() << "\n";
            out << kAmbiguous << "\n";
            status = kRuntimeAmbiguity;
        }
    };
    if (o.stdin_lines) {
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            run_one(line);
        }
    } else {
        run_one(o.input.value_or(""));
    }
    return status;
}

inline int cmd_check(const std::string& artifact, const std::string& spec_path, std::ostream& out, std::ostream& err) {
    auto t = load_or_report(artifact, err);
    if (!t) return kIo;
    std::optional<InterleaveSpec> spec;
    if (!spec_path.empty()) {
        try {
            spec = parse_interleave_spec(read_file(spec_path));
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kIo;
        }
    }

    auto verdict = is_functional(*t);
    if (verdict.certified) {
        out << "functional: certified\n";
    } else {
        out << "functional: unknown (" << verdict.witnesses.size() << " conflict(s))\n";
        print_witnesses(out, verdict.witnesses);
    }

    bool colored = true;
    if (spec) {
        auto rep = check_coloring(*t, *spec);
        colored = rep.ok();
        if (colored) out << "coloring: ok\n";
        else {
            out << "coloring: " << rep.violations.size() << " violation(s)\n";
            print_violations(out, rep);
        }
    }
    if (!colored) return kColoring;
    return verdict.certified ? kOk : kConflicts;
}

inline int cmd_export(const std::string& artifact, const std::string& format, std::ostream& out, std::ostream& err) {
    auto t = load_or_report(artifact, err);
    if (!t) return kIo;
    if (format != "dot") {
        err << "error: unsupported format '" << format << "'\n";
        return kUsage;
    }
    out << to_dot(*t);
    return out ? kOk : kIo;
}

/// Entry point shared by the binary and the tests.
inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compile and run weighted transducer expressions", "gfst"};
    app.require_subcommand(1);

    CompileOptions copt;
    auto* compile_cmd = app.add_subcommand("compile", "compile an expression file into an artifact");
    compile_cmd->add_option("input", copt.input, "expression file")->required();
    compile_cmd->add_option("-a,--alphabets", copt.spec, "interleaved alphabet specification");
    compile_cmd->add_option("-p,--policy", copt.policy, "preferred weights: min or max")
        ->check(CLI::IsMember({"min", "max"}));
    compile_cmd->add_flag("--strict", copt.strict, "treat weight conflicts as errors");
    compile_cmd->add_option("-o,--output", copt.output, "artifact path")->required();

    RunOptions ropt;
    std::string input_text;
    auto* run_cmd = app.add_subcommand("run", "evaluate an artifact on input strings");
    run_cmd->add_option("artifact", ropt.artifact, "compiled artifact")->required();
    auto* input_opt = run_cmd->add_option("--input", input_text, "single input string");
    auto* stdin_opt = run_cmd->add_flag("--stdin", ropt.stdin_lines, "read one input per line from stdin");
    input_opt->excludes(stdin_opt);

    std::string check_artifact, check_spec;
    auto* check_cmd = app.add_subcommand("check", "report functionality and alphabet coloring");
    check_cmd->add_option("artifact", check_artifact, "compiled artifact")->required();
    check_cmd->add_option("-a,--alphabets", check_spec, "interleaved alphabet specification");

    std::string export_artifact, export_format;
    auto* export_cmd = app.add_subcommand("export", "render an artifact");
    export_cmd->add_option("artifact", export_artifact, "compiled artifact")->required();
    export_cmd->add_option("--format", export_format, "output format")->required()->check(CLI::IsMember({"dot"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    if (*compile_cmd) return cmd_compile(copt, out, err);
    if (*run_cmd) {
        if (!*input_opt && !*stdin_opt) {
            err << "error: run needs --input or --stdin\n" << run_cmd->help();
            return kUsage;
        }
        if (*input_opt) ropt.input = input_text;
        return cmd_run(ropt, in, out, err);
    }
    if (*check_cmd) return cmd_check(check_artifact, check_spec, out, err);
    return cmd_export(export_artifact, export_format, out, err);
}

} // namespace gfst::cli

#endif // GFST_TOOLS_CLI_HPP
