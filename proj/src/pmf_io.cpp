#include "maxconv/pmf_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace maxconv {

using nlohmann::json;

json toJson(const Pmf& p) {
    return json{{"offset", p.offset()},
                {"values", std::vector<double>(p.values().begin(), p.values().end())}};
}

Pmf pmfFromJson(const json& j) {
    if (!j.is_object() || !j.contains("offset") || !j.contains("values")) {
        throw std::invalid_argument("Pmf JSON needs \"offset\" and \"values\"");
    }
    if (!j.at("offset").is_number_integer()) {
        throw std::invalid_argument("Pmf JSON \"offset\" must be an integer");
    }
    return Pmf(j.at("values").get<std::vector<double>>(), j.at("offset").get<Outcome>());
}

namespace {

std::ifstream openForRead(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

std::ofstream openForWrite(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

}  // namespace

Pmf readPmf(const std::filesystem::path& path) {
    auto in = openForRead(path);
    return pmfFromJson(json::parse(in));
}

void writePmf(const std::filesystem::path& path, const Pmf& p) {
    auto out = openForWrite(path);
    out << toJson(p).dump() << '\n';
}

std::vector<Pmf> readPmfLines(std::istream& in) {
    std::vector<Pmf> pmfs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        pmfs.push_back(pmfFromJson(json::parse(line)));
    }
    return pmfs;
}

std::vector<Pmf> readPmfLines(const std::filesystem::path& path) {
    auto in = openForRead(path);
    return readPmfLines(in);
}

void writePmfLines(std::ostream& out, const std::vector<Pmf>& pmfs) {
    for (const Pmf& p : pmfs) {
        out << toJson(p).dump() << '\n';
    }
}

void writePmfLines(const std::filesystem::path& path, const std::vector<Pmf>& pmfs) {
    auto out = openForWrite(path);
    writePmfLines(out, pmfs);
}

}  // namespace maxconv
