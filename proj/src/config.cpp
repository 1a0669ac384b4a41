#include "expbasin/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace expbasin {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_one_double(std::string_view sv) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc() || ptr != sv.data() + sv.size())
        throw std::invalid_argument("bad number: " + std::string(sv));
    return v;
}

}  // namespace

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line without '=': " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

cplx parse_complex(const std::string& text) {
    std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        return {parse_one_double(trim(text)), 0.0};
    return {parse_one_double(trim(text.substr(0, comma))),
            parse_one_double(trim(text.substr(comma + 1)))};
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_one_double(item));
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Manifest::set(const std::string& key, const std::string& value) { config_[key] = value; }
void Manifest::set(const std::string& key, double value) { config_[key] = fmt_double(value); }
void Manifest::set(const std::string& key, long long value) {
    config_[key] = std::to_string(value);
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot hash missing file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string bytes = ss.str();
    return fnv1a64(bytes);
}

void Manifest::add_output(const std::string& out_dir, const std::string& filename) {
    output_names_.push_back(filename);
    std::string path = out_dir.empty() ? filename : out_dir + "/" + filename;
    output_hashes_.push_back(hash_file(path));
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    output_sizes_.push_back(static_cast<std::size_t>(in.tellg()));
}

std::uint64_t Manifest::config_hash() const {
    std::string canon = "subcommand=" + subcommand_ + "\n";
    for (const auto& [k, v] : config_) canon += k + "=" + v + "\n";
    return fnv1a64(canon);
}

void Manifest::write(const std::string& out_dir) const {
    nlohmann::ordered_json j;
    j["tool"] = "expbasin";
    j["subcommand"] = subcommand_;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : config_) cfg[k] = v;
    j["config"] = cfg;
    char hash_buf[32];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(config_hash()));
    j["config_hash"] = hash_buf;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < output_names_.size(); ++i) {
        nlohmann::ordered_json o;
        o["path"] = output_names_[i];
        o["bytes"] = output_sizes_[i];
        std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                      static_cast<unsigned long long>(output_hashes_[i]));
        o["fnv64"] = hash_buf;
        outs.push_back(o);
    }
    j["outputs"] = outs;
    std::string path = out_dir.empty() ? "manifest.json" : out_dir + "/manifest.json";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace expbasin
