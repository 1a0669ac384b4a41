#pragma once

#include <map>
#include <string>
#include <vector>

#include "expbasin/util.hpp"

namespace expbasin {

// Flat key=value config file: one pair per line, '#' comments, whitespace
// trimmed. CLI flags override file values.
std::map<std::string, std::string> parse_kv_file(const std::string& path);

// Locale-proof "re,im" parsing (std::from_chars based).
cplx parse_complex(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

// %.17g rendering, round-trip exact for doubles.
std::string fmt_double(double v);

// Reproducibility manifest: resolved config plus output hashes. Written as
// manifest.json next to the outputs; identical configs must produce
// byte-identical manifests, so nothing time- or host-dependent goes in.
class Manifest {
  public:
    explicit Manifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    void add_output(const std::string& out_dir, const std::string& filename);

    std::uint64_t config_hash() const;
    void write(const std::string& out_dir) const;

  private:
    std::string subcommand_;
    std::map<std::string, std::string> config_;
    std::vector<std::string> output_names_;
    std::vector<std::uint64_t> output_hashes_;
    std::vector<std::size_t> output_sizes_;
};

std::uint64_t hash_file(const std::string& path);

}  // namespace expbasin
