#include "svs/sysfile.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "svs/error.hpp"

namespace svs {

namespace {

using nlohmann::json;

std::uint64_t get_uint(const json& j, const char* key) {
  if (!j.contains(key)) throw UsageError(std::string("system file is missing \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw UsageError(std::string("\"") + key + "\" must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

struct Parsed {
  FieldCtx ctx = FieldCtx::prime(2);
  unsigned r = 0, s = 0, d = 0;
  std::vector<MPoly> polys;
};

Parsed parse_common(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("system file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("system file must be a JSON object");
  Parsed p;
  const std::uint64_t q = get_uint(j, "q");
  const std::uint64_t r = get_uint(j, "r"), s = get_uint(j, "s"), d = get_uint(j, "d");
  if (r == 0 || r > 64 || s == 0 || s > 64 || d > 1000) throw UsageError("system dimensions out of range");
  p.ctx = FieldCtx::of_order(q);
  p.r = static_cast<unsigned>(r);
  p.s = static_cast<unsigned>(s);
  p.d = static_cast<unsigned>(d);
  if (!j.contains("polynomials") || !j["polynomials"].is_array()) throw UsageError("\"polynomials\" must be an array");
  for (const auto& poly : j["polynomials"]) {
    if (!poly.is_array()) throw UsageError("each polynomial must be an array of terms");
    std::vector<Term> terms;
    for (const auto& t : poly) {
      if (t.is_string()) {
        MPoly one = parse_mpoly(t.get<std::string>(), p.r, p.ctx);
        terms.insert(terms.end(), one.terms().begin(), one.terms().end());
        continue;
      }
      if (!t.is_object() || !t.contains("c") || !t.contains("e")) throw UsageError("term must be {\"c\": .., \"e\": [..]}");
      const auto& c = t["c"];
      const auto& e = t["e"];
      if (!c.is_number_integer() || c.get<std::int64_t>() < 0 || c.get<std::uint64_t>() >= q)
        throw UsageError("term coefficient must be an integer in [0, q)");
      if (!e.is_array() || e.size() != p.r) throw UsageError("term exponent array must have length r");
      ExpVec ev;
      for (const auto& x : e) {
        if (!x.is_number_integer() || x.get<std::int64_t>() < 0 || x.get<std::int64_t>() > 1000)
          throw UsageError("exponents must be small nonnegative integers");
        ev.push_back(x.get<std::uint32_t>());
      }
      terms.push_back(Term{std::move(ev), Felt{c.get<std::uint64_t>()}});
    }
    p.polys.push_back(MPoly::from_terms(p.r, std::move(terms), p.ctx));
  }
  return p;
}

}  // namespace

std::string write_system_file(const SystemSpec& sys) {
  std::ostringstream os;
  os << "{\n  \"q\": " << sys.ctx.q() << ",\n  \"r\": " << sys.r << ",\n  \"s\": " << sys.s << ",\n  \"d\": " << sys.d
     << ",\n  \"polynomials\": [";
  for (std::size_t i = 0; i < sys.polys.size(); ++i) {
    os << (i ? ",\n" : "\n") << "    [";
    const auto& terms = sys.polys[i].terms();
    for (std::size_t k = 0; k < terms.size(); ++k) {
      os << (k ? ",\n" : "\n") << "      {\"c\": " << terms[k].c.code << ", \"e\": [";
      for (std::size_t v = 0; v < terms[k].e.size(); ++v) os << (v ? ", " : "") << terms[k].e[v];
      os << "]}";
    }
    os << (terms.empty() ? "]" : "\n    ]");
  }
  os << (sys.polys.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

SystemSpec read_system_file(const std::string& text) {
  Parsed p = parse_common(text);
  SystemSpec sys;
  sys.ctx = p.ctx;
  sys.r = p.r;
  sys.s = p.s;
  sys.d = p.d;
  sys.polys = std::move(p.polys);
  validate_system(sys);
  return sys;
}

ZeroDimQuery read_query_file(const std::string& text) {
  Parsed p = parse_common(text);
  if (p.r != p.s) throw UsageError("point counting needs a square system (r = s)");
  if (p.polys.size() != p.s) throw UsageError("system must contain exactly s polynomials");
  ZeroDimQuery q;
  q.ctx = p.ctx;
  q.s = p.s;
  q.dmax = p.d;
  q.polys = std::move(p.polys);
  validate_query(q);
  return q;
}

std::vector<Strip> parse_strips(const std::string& text, unsigned length, const FieldCtx& ctx) {
  std::vector<Strip> out;
  std::stringstream all(text);
  std::string one;
  while (std::getline(all, one, ';')) {
    Strip a;
    std::stringstream cs(one);
    std::string tok;
    while (std::getline(cs, tok, ',')) {
      const auto b = tok.find_first_not_of(" \t");
      const auto e = tok.find_last_not_of(" \t");
      if (b == std::string::npos) throw UsageError("empty strip coordinate in '" + one + "'");
      tok = tok.substr(b, e - b + 1);
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        if (tok[0] == '-') throw std::invalid_argument("negative");
        v = std::stoull(tok, &used);
      } catch (const std::exception&) {
        throw UsageError("strip coordinate '" + tok + "' is not a nonnegative integer");
      }
      if (used != tok.size() || v >= ctx.q()) throw UsageError("strip coordinate '" + tok + "' out of range");
      a.push_back(Felt{v});
    }
    if (a.size() != length)
      throw UsageError("strip '" + one + "' must have " + std::to_string(length) + " coordinates");
    out.push_back(std::move(a));
  }
  if (out.empty()) throw UsageError("no strips given");
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace svs
