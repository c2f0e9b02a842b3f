#include "snlab/artifact_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "snlab/version.hpp"

namespace snlab::io {

using nlohmann::json;

std::string hexfloat(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double parse_hexfloat(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw FormatError("bad float literal '" + s + "'");
    }
    return v;
}

void write_distribution(const stats::EmpiricalDistribution& d,
                        const std::filesystem::path& path) {
    if (d.count() == 0) throw FormatError("refusing to write an empty distribution");

    json header;
    header["format_version"] = kFormatVersion;
    header["kind"] = "snlab-distribution";
    header["code_version"] = kCodeVersion;
    header["count"] = d.count();
    json meta;
    meta["model"] = d.meta().model;
    meta["weight"] = d.meta().weight;
    meta["functional"] = d.meta().functional;
    meta["n"] = d.meta().n;
    meta["seed"] = d.meta().seed;
    meta["replicates"] = d.meta().replicates;
    meta["extra"] = d.meta().extra;
    header["meta"] = std::move(meta);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << header.dump() << '\n';
    for (double v : d.values()) out << hexfloat(v) << '\n';
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

stats::EmpiricalDistribution read_distribution(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw FormatError("missing artifact header");
    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad artifact header: ") + e.what());
    }
    if (!header.contains("format_version") ||
        header["format_version"].get<int>() != kFormatVersion) {
        throw FormatError("artifact format version mismatch in '" + path.string() + "'");
    }
    if (header.value("kind", "") != "snlab-distribution") {
        throw FormatError("not a distribution artifact: '" + path.string() + "'");
    }

    stats::Meta meta;
    const json& jm = header.at("meta");
    meta.model = jm.value("model", "");
    meta.weight = jm.value("weight", "");
    meta.functional = jm.value("functional", "");
    meta.n = jm.value("n", std::uint64_t{0});
    meta.seed = jm.value("seed", std::uint64_t{0});
    meta.replicates = jm.value("replicates", std::uint64_t{0});
    if (jm.contains("extra")) {
        meta.extra = jm["extra"].get<std::map<std::string, std::string>>();
    }

    const auto count = header.at("count").get<std::size_t>();
    std::vector<double> values;
    values.reserve(count);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        values.push_back(parse_hexfloat(line));
    }
    if (values.size() != count) {
        throw FormatError("artifact value count mismatch: header says " + std::to_string(count) +
                          ", file has " + std::to_string(values.size()));
    }
    return stats::EmpiricalDistribution(std::move(values), std::move(meta));
}

}  // namespace snlab::io
