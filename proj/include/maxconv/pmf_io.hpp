#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "maxconv/pmf.hpp"

namespace maxconv {

// {"offset": int, "values": [float, ...]}
nlohmann::json toJson(const Pmf& p);
Pmf pmfFromJson(const nlohmann::json& j);

Pmf readPmf(const std::filesystem::path& path);
void writePmf(const std::filesystem::path& path, const Pmf& p);

// One Pmf object per line; blank lines are skipped.
std::vector<Pmf> readPmfLines(std::istream& in);
std::vector<Pmf> readPmfLines(const std::filesystem::path& path);
void writePmfLines(std::ostream& out, const std::vector<Pmf>& pmfs);
void writePmfLines(const std::filesystem::path& path, const std::vector<Pmf>& pmfs);

}  // namespace maxconv
