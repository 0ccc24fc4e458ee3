#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "repclust/error.hpp"
#include "repclust/parallel.hpp"

namespace fs = std::filesystem;
using namespace repclust;
using namespace repclust::cli;

namespace {

constexpr int kExitComputation = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 3;

struct GlobalOptions {
    std::string out = ".";
    std::optional<std::size_t> threads;
    std::string format;
};

std::size_t resolve_threads(const std::optional<std::size_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("REPCLUST_THREADS")) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(env, &used);
            if (used == std::string(env).size() && v >= 1) return v;
        } catch (const std::exception&) {
        }
        throw InvalidArgument(std::string("REPCLUST_THREADS must be a positive integer, got '") + env + "'");
    }
    return 1;
}

// Drops the options that may differ between a run and its replay.
std::vector<std::string> strip_run_options(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--out" || a == "--threads") {
            ++i;
            continue;
        }
        if (a.rfind("--out=", 0) == 0 || a.rfind("--threads=", 0) == 0) continue;
        out.push_back(a);
    }
    return out;
}

void add_global_options(CLI::App& app, GlobalOptions& g) {
    app.add_option("--out", g.out, "Output directory (created if missing)")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (default: REPCLUST_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "Dataset format: csv or binary (default: by extension)");
}

// Parses and runs one analysis invocation. Returns the process exit code.
int dispatch(const std::vector<std::string>& args, const std::optional<std::string>& replay_manifest) {
    CLI::App app{"Representation clustering analysis toolkit", "repclust"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    add_global_options(app, g);

    RunContext ctx;
    std::function<void()> action;
    register_commands(app, ctx, action);

    std::string manifest_path;
    if (!replay_manifest) {
        CLI::App* replay = app.add_subcommand("replay", "Re-run a recorded invocation from its manifest");
        replay->add_option("manifest", manifest_path, "manifest-<command>.json")->required();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    if (!replay_manifest && app.got_subcommand("replay")) {
        const RunManifest m = load_manifest(manifest_path);
        const fs::path manifest_dir = fs::absolute(manifest_path).parent_path();
        fs::path out = app.get_option("--out")->count() ? fs::absolute(g.out) : manifest_dir;
        for (const FileRecord& in : m.inputs) {
            const fs::path p = fs::path(in.path).is_absolute() ? fs::path(in.path) : fs::path(m.working_directory) / in.path;
            const std::string h = hash_file(p);
            if (h != in.hash) throw InvalidArgument(p.string() + ": input changed since the recorded run (" + h +
                                                    " vs " + in.hash + ")");
        }
        std::error_code ec;
        fs::current_path(m.working_directory, ec);
        if (ec) throw IoError(m.working_directory, "cannot enter recorded working directory: " + ec.message());
        std::vector<std::string> again = m.replay_args;
        again.insert(again.begin(), {"--out", out.string()});
        const std::size_t threads = resolve_threads(g.threads.has_value() ? g.threads : std::optional(m.threads));
        again.insert(again.begin(), {"--threads", std::to_string(threads)});
        return dispatch(again, manifest_path);
    }

    const std::size_t threads = resolve_threads(g.threads);
    set_thread_count(threads);
    if (!g.format.empty()) ctx.format = parse_file_format(g.format);
    ctx.out_dir = g.out;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec || !fs::is_directory(ctx.out_dir)) throw IoError(g.out, "cannot create output directory");

    ctx.manifest.argv = args;
    ctx.manifest.replay_args = strip_run_options(args);
    ctx.manifest.working_directory = fs::current_path().string();
    ctx.manifest.out_dir = fs::absolute(ctx.out_dir).string();
    ctx.manifest.threads = threads;
    ctx.manifest.started_at = utc_timestamp();
    action();
    ctx.write_manifest();
    if (replay_manifest) std::cerr << "replayed " << *replay_manifest << " into " << ctx.manifest.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return dispatch(args, std::nullopt);
    } catch (const IoError& e) {  // FormatError included
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
}
