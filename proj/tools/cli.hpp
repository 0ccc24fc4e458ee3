#pragma once

#include <cstdint>
#include <functional>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "repclust/features_io.hpp"

namespace CLI {
class App;
}

namespace repclust::cli {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "repclust/1";

std::uint64_t fnv1a64(std::string_view bytes);
/// "fnv1a64:" followed by 16 hex digits of the file contents.
std::string hash_file(const std::filesystem::path& path);
std::string utc_timestamp();

struct FileRecord {
    std::string path;
    std::string hash;
};

/// Everything needed to re-run one invocation.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;         // as invoked, program name excluded
    std::vector<std::string> replay_args;  // argv without --out/--threads
    json config = json::object();
    std::uint64_t seed = 0;
    std::vector<FileRecord> inputs;
    std::vector<FileRecord> outputs;
    std::string working_directory;
    std::string out_dir;
    std::size_t threads = 1;
    std::string started_at;
    std::string finished_at;

    json to_json() const;
    static RunManifest from_json(const json& j, const std::string& path);
};

RunManifest load_manifest(const std::string& path);

/// Per-invocation state shared by the subcommands: output directory,
/// dataset format and the manifest being assembled.
class RunContext {
public:
    std::filesystem::path out_dir = ".";
    std::optional<FileFormat> format;
    RunManifest manifest;

    /// Format for a dataset path: the --format flag, else the extension
    /// (.csv is CSV, anything else binary).
    FileFormat format_for(const std::string& path) const;
    std::string dataset_extension() const;

    Dataset read_dataset(const std::string& path);
    json read_json(const std::filesystem::path& path);
    void record_input(const std::filesystem::path& path);

    std::filesystem::path output_path(const std::string& name) const { return out_dir / name; }
    void write_text(const std::string& name, const std::string& body);
    void write_json(const std::string& name, const json& body);
    /// Registers a file already written by the library.
    void record_output(const std::string& name);

    void write_manifest();
};

/// Base object of every JSON report.
json report_header(const std::string& command);
/// JSON number, or null for non-finite values.
json finite_or_null(double v);

/// Adds every analysis subcommand to `app`. The parsed subcommand stores
/// the work to run in `action`.
void register_commands(CLI::App& app, RunContext& ctx, std::function<void()>& action);

}  // namespace repclust::cli
