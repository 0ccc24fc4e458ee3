#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "repclust/error.hpp"

namespace repclust::cli {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError(path.string(), "write failed");
}

json records_to_json(const std::vector<FileRecord>& records) {
    json a = json::array();
    for (const auto& r : records) a.push_back({{"path", r.path}, {"hash", r.hash}});
    return a;
}

std::vector<FileRecord> records_from_json(const json& a) {
    std::vector<FileRecord> out;
    for (const auto& r : a) out.push_back({r.at("path").get<std::string>(), r.at("hash").get<std::string>()});
    return out;
}

}  // namespace

std::string hash_file(const fs::path& path) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(slurp(path))));
    return buf;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json RunManifest::to_json() const {
    return {
        {"schema_version", kSchemaVersion},
        {"tool_version", kToolVersion},
        {"command", command},
        {"argv", argv},
        {"replay_args", replay_args},
        {"config", config},
        {"seed", seed},
        {"inputs", records_to_json(inputs)},
        {"outputs", records_to_json(outputs)},
        {"working_directory", working_directory},
        {"out_dir", out_dir},
        {"threads", threads},
        {"started_at", started_at},
        {"finished_at", finished_at},
    };
}

RunManifest RunManifest::from_json(const json& j, const std::string& path) {
    try {
        if (j.at("schema_version") != kSchemaVersion)
            throw FormatError(FormatErrorKind::malformed, path, "unsupported manifest schema version");
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.argv = j.at("argv").get<std::vector<std::string>>();
        m.replay_args = j.at("replay_args").get<std::vector<std::string>>();
        m.config = j.at("config");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.inputs = records_from_json(j.at("inputs"));
        m.outputs = records_from_json(j.at("outputs"));
        m.working_directory = j.at("working_directory").get<std::string>();
        m.out_dir = j.at("out_dir").get<std::string>();
        m.threads = j.at("threads").get<std::size_t>();
        m.started_at = j.at("started_at").get<std::string>();
        m.finished_at = j.at("finished_at").get<std::string>();
        return m;
    } catch (const json::exception& e) {
        throw FormatError(FormatErrorKind::malformed, path, std::string("invalid manifest: ") + e.what());
    }
}

RunManifest load_manifest(const std::string& path) {
    const std::string body = slurp(path);
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw FormatError(FormatErrorKind::malformed, path, e.what());
    }
    return RunManifest::from_json(j, path);
}

FileFormat RunContext::format_for(const std::string& path) const {
    if (format) return *format;
    return fs::path(path).extension() == ".csv" ? FileFormat::csv : FileFormat::binary;
}

std::string RunContext::dataset_extension() const {
    return format.value_or(FileFormat::binary) == FileFormat::csv ? ".csv" : ".bin";
}

Dataset RunContext::read_dataset(const std::string& path) {
    Dataset ds = load_dataset(path, format_for(path));
    record_input(path);
    if (ds.name.empty()) ds.name = fs::path(path).stem().string();
    return ds;
}

json RunContext::read_json(const fs::path& path) {
    const std::string body = slurp(path);
    record_input(path);
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw FormatError(FormatErrorKind::malformed, path.string(), e.what());
    }
}

void RunContext::record_input(const fs::path& path) {
    manifest.inputs.push_back({path.string(), hash_file(path)});
}

void RunContext::write_text(const std::string& name, const std::string& body) {
    spill(output_path(name), body);
    record_output(name);
}

void RunContext::write_json(const std::string& name, const json& body) { write_text(name, body.dump(2) + "\n"); }

void RunContext::record_output(const std::string& name) {
    manifest.outputs.push_back({name, hash_file(output_path(name))});
}

void RunContext::write_manifest() {
    manifest.finished_at = utc_timestamp();
    spill(output_path("manifest-" + manifest.command + ".json"), manifest.to_json().dump(2) + "\n");
}

json report_header(const std::string& command) {
    return {{"schema_version", kSchemaVersion}, {"command", command}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace repclust::cli
