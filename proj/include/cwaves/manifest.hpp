#pragma once

// Run manifest: config hash, toolkit version, timestamps, input digests and
// the inventory of every file the run wrote. The generated_at stamp is the
// only non-deterministic entry; data outputs are reproducible bit for bit.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwaves/io.hpp"
#include "cwaves/version.hpp"

namespace cwaves {

class RunManifest {
public:
    RunManifest(std::filesystem::path out_dir, std::string config_hash)
        : dir_(std::move(out_dir)), config_hash_(std::move(config_hash)) {}

    void add_input(const std::string& name, const std::filesystem::path& path) {
        inputs_.push_back({name, path.string(), file_digest(path)});
    }

    /// Registers a file just written under the output directory.
    void add_output(const std::filesystem::path& path) {
        outputs_.push_back(path);
    }

    void write() const {
        nlohmann::json j;
        j["config_hash"] = config_hash_;
        j["toolkit_version"] = version_string;
        j["digest_algorithm"] = "fnv1a64";
        j["generated_at"] = timestamp();
        nlohmann::json ins = nlohmann::json::array();
        for (const auto& [name, path, digest] : inputs_)
            ins.push_back({{"name", name}, {"path", path}, {"digest", digest}});
        j["inputs"] = ins;
        nlohmann::json outs = nlohmann::json::array();
        for (const auto& p : outputs_) {
            outs.push_back({{"path", std::filesystem::relative(p, dir_).string()},
                            {"bytes", std::filesystem::file_size(p)},
                            {"digest", file_digest(p)}});
        }
        j["outputs"] = outs;
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << j.dump(2) << "\n";
    }

private:
    static std::string timestamp() {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::tm tm{};
        gmtime_r(&t, &tm);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    std::filesystem::path dir_;
    std::string config_hash_;
    struct Input {
        std::string name, path, digest;
    };
    std::vector<Input> inputs_;
    std::vector<std::filesystem::path> outputs_;
};

} // namespace cwaves
