#include "seqmd/datasets/jsonl.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "seqmd/error.h"
#include "seqmd/json_util.h"

namespace seqmd {
namespace {

void AppendDouble(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  const std::string_view text(buf, res.ptr - buf);
  out += text;
  // Keep integral values (including -0) typed as floating point on read.
  if (text.find_first_of(".e") == std::string_view::npos) out += ".0";
}

void AppendVector(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    AppendDouble(out, v[i]);
  }
  out += ']';
}

std::string EscapeString(const std::string& s) { return Json(s).dump(); }

std::string GroupLine(const QueryGroup& g) {
  std::string line = "{\"query_id\":" + EscapeString(g.query_id) +
                     ",\"region\":" + std::to_string(g.region) + ",\"platform\":\"" +
                     PlatformName(g.platform) + "\",\"candidates\":[";
  for (std::size_t i = 0; i < g.records.size(); ++i) {
    const InteractionRecord& r = g.records[i];
    if (i) line += ',';
    line += "{\"listing_region\":" + std::to_string(r.listing_region) + ",\"x_user\":";
    AppendVector(line, r.x_user);
    line += ",\"x_listing\":";
    AppendVector(line, r.x_listing);
    line += ",\"click\":" + std::to_string(r.labels.click) +
            ",\"cart\":" + std::to_string(r.labels.cart) +
            ",\"purchase\":" + std::to_string(r.labels.purchase) + "}";
  }
  line += "]}";
  return line;
}

QueryGroup ParseGroup(const Json& j, const DatasetHeader& header) {
  QueryGroup g;
  g.query_id = j.at("query_id").get<std::string>();
  g.region = j.at("region").get<int>();
  g.platform = ParsePlatform(j.at("platform").get<std::string>());
  if (g.region < 0 || g.region >= header.regions) {
    throw FormatError("region " + std::to_string(g.region) + " outside [0, R)");
  }
  for (const Json& c : j.at("candidates")) {
    InteractionRecord r;
    r.query_id = g.query_id;
    r.region = g.region;
    r.platform = g.platform;
    r.listing_region = c.at("listing_region").get<int>();
    r.x_user = c.at("x_user").get<std::vector<double>>();
    r.x_listing = c.at("x_listing").get<std::vector<double>>();
    r.labels.click = c.at("click").get<int>();
    r.labels.cart = c.at("cart").get<int>();
    r.labels.purchase = c.at("purchase").get<int>();
    g.records.push_back(std::move(r));
  }
  ValidateGroup(g, header.m, header.p);
  return g;
}

}  // namespace

void WriteJsonl(const Dataset& data, std::ostream& out) {
  out << "{\"m\":" << data.header.m << ",\"p\":" << data.header.p
      << ",\"R\":" << data.header.regions << "}\n";
  for (const QueryGroup& g : data.groups) out << GroupLine(g) << '\n';
  if (!out) throw Error("failed writing dataset");
}

void WriteJsonl(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  WriteJsonl(data, out);
}

Dataset ReadJsonl(std::istream& in) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      if (!have_header) {
        RejectUnknownKeys(j, {"m", "p", "R"}, "header");
        data.header.m = j.at("m").get<int>();
        data.header.p = j.at("p").get<int>();
        data.header.regions = j.at("R").get<int>();
        if (data.header.m < 0 || data.header.p < 0 || data.header.regions < 1) {
          throw FormatError("invalid header dimensions");
        }
        have_header = true;
        continue;
      }
      data.groups.push_back(ParseGroup(j, data.header));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return data;
}

Dataset ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return ReadJsonl(in);
}

}  // namespace seqmd
