// Command-line front end for the starset library: field inspection,
// polynomial decomposition, extremal product-free set computations in
// finite-field unit groups, their cyclic-group counterparts, and the
// self-checking verification suite.
//
// Exit codes: 0 success, 1 computation or assertion failure, 2 usage or
// configuration error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "starset/cache.hpp"
#include "starset/config.hpp"
#include "starset/parallel.hpp"
#include "starset/starsets.hpp"
#include "starset/verify.hpp"
#include "starset/version.hpp"

namespace {

using namespace starset;
using nlohmann::json;

struct global_opts {
  std::string cache_path;
  std::string output;
  std::string format;  // "json", "csv", or empty for the per-command default
  u64 seed = 0;
  unsigned threads = 1;
  bool recheck = false;
};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// CSV field quoting for values that may contain commas (polynomial text).
std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

void emit(const global_opts& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(g.output);
    require(out.good(), errc::config_invalid, "cannot open output file: " + g.output);
    out << text << "\n";
  }
}

std::shared_ptr<const field> make_field(u64 p, u32 m) {
  return std::make_shared<const field>(field::build(p, m));
}

std::string modulus_text(const field& F) {
  std::string s;
  for (std::size_t i = 0; i < F.modulus().size(); ++i) {
    if (i) s += ',';
    s += std::to_string(F.modulus()[i]);
  }
  return s;
}

std::vector<u64> parse_u64_list(const std::string& text) {
  std::vector<u64> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    require(!part.empty(), errc::config_invalid, "empty entry in list: " + text);
    out.push_back(std::stoull(part));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

json frac_json(const std::optional<frac>& f) {
  if (!f) return nullptr;
  return json{{"num", f->num}, {"den", f->den}};
}

// ---------------------------------------------------------------------------

int run_field_info(const global_opts& g, u64 p, u32 m) {
  auto F = make_field(p, m);
  json j;
  j["schema"] = schema_version;
  j["p"] = p;
  j["m"] = m;
  j["q"] = F->q();
  j["modulus"] = modulus_text(*F);
  j["generator"] = format_elt(*F, F->generator());
  j["unit_group_factors"] = json::array();
  for (auto [r, e] : F->unit_group_factors())
    j["unit_group_factors"].push_back(json::array({r, e}));
  emit(g, j.dump(2));
  return 0;
}

int run_power_part(const global_opts& g, u64 p, u32 m, const std::string& htext) {
  auto F = make_field(p, m);
  fpoly h = parse_poly(*F, htext);
  power_part_result pp = power_part(*F, h, g.seed);
  u64 n = std::gcd(static_cast<u64>(pp.ell), F->q1());
  json j;
  j["schema"] = schema_version;
  j["q"] = F->q();
  j["h"] = format_poly(*F, h);
  j["c"] = format_elt(*F, pp.c);
  j["f"] = format_poly(*F, pp.f);
  j["ell"] = pp.ell;
  j["n"] = n;
  j["s"] = F->dlog(pp.c) % n;
  emit(g, j.dump(2));
  return 0;
}

int run_value_set(const global_opts& g, u64 p, u32 m, const std::string& htext) {
  auto F = make_field(p, m);
  fpoly h = parse_poly(*F, htext);
  std::vector<elt> vals = value_set(*F, h);
  if (g.format == "csv") {
    std::string out = "value";
    for (elt v : vals) out += "\n" + format_elt(*F, v);
    emit(g, out);
  } else {
    json j;
    j["schema"] = schema_version;
    j["q"] = F->q();
    j["h"] = format_poly(*F, h);
    j["size"] = vals.size();
    j["values"] = json::array();
    for (elt v : vals) j["values"].push_back(format_elt(*F, v));
    emit(g, j.dump(2));
  }
  return 0;
}

int run_weil(const global_opts& g, u64 p, u32 m, const std::string& ftext, double tol) {
  auto F = make_field(p, m);
  fpoly f = parse_poly(*F, ftext);
  unity_table tab = unity_table::make(*F);
  std::string csv;
  std::function<void(u64, elt, double, double)> row_cb;
  if (g.format == "csv") {
    csv = "q,f,char_index,a,magnitude,bound,pass";
    row_cb = [&](u64 j, elt a, double mag, double bound) {
      csv += "\n" + std::to_string(F->q()) + "," + csv_quote(format_poly(*F, f)) + "," +
             std::to_string(j) + "," + format_elt(*F, a) + "," + fmt6(mag) + "," + fmt6(bound) +
             "," + (mag <= bound + tol ? "true" : "false");
    };
  }
  weil_report rep = weil_verify(*F, f, tol, &tab, g.seed, row_cb);
  if (g.format == "csv") {
    emit(g, csv);
  } else {
    json j;
    j["schema"] = schema_version;
    j["q"] = F->q();
    j["f"] = format_poly(*F, f);
    j["checked"] = rep.checked;
    j["skipped"] = rep.skipped;
    j["max_ratio"] = rep.max_ratio;
    j["pass"] = rep.pass;
    j["violations"] = json::array();
    for (const auto& v : rep.violations)
      j["violations"].push_back({{"char_index", v.j},
                                 {"a", format_elt(*F, v.a)},
                                 {"magnitude", v.magnitude},
                                 {"bound", v.bound}});
    emit(g, j.dump(2));
  }
  return rep.pass ? 0 : 1;
}

int run_m_exact(const global_opts& g, u32 k, u32 n, u32 s, u32 cap) {
  m_record rec = m_exact(k, n, s, {cap});
  json j;
  j["schema"] = schema_version;
  j["k"] = k;
  j["n"] = n;
  j["s"] = rec.s;
  j["lower"] = rec.lower;
  j["upper"] = rec.upper;
  j["value"] = *rec.value;
  j["method"] = m_method_name(rec.method);
  j["witness"] = rec.witness->elements();
  emit(g, j.dump(2));
  return 0;
}

std::string witness_text(const m_record& r) {
  if (!r.witness || r.witness->size() == 0) return "-";
  std::string w;
  for (u32 e : r.witness->elements()) {
    if (!w.empty()) w += '|';
    w += std::to_string(e);
  }
  return w;
}

int run_m_table(const global_opts& g, u32 k, u32 n_min, u32 n_max, const std::string& s_sel,
                u32 cap) {
  require(n_min >= 1 && n_min <= n_max, errc::config_invalid, "need 1 <= n-min <= n-max");
  std::vector<m_record> rows;
  for (u32 n = n_min; n <= n_max; ++n) {
    if (s_sel == "all") {
      for (u32 s = 0; s < n; ++s) rows.push_back(m_classify(k, n, s, {cap}));
    } else {
      rows.push_back(m_classify(k, n, static_cast<u32>(std::stoul(s_sel)) % n, {cap}));
    }
  }
  if (g.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json j;
      j["k"] = r.k;
      j["n"] = r.n;
      j["s"] = r.s;
      j["lower"] = r.lower;
      j["upper"] = r.upper;
      j["value"] = r.value ? json(*r.value) : json(nullptr);
      j["method"] = m_method_name(r.method);
      j["witness"] = r.witness ? json(r.witness->elements()) : json(nullptr);
      arr.push_back(std::move(j));
    }
    json top;
    top["schema"] = schema_version;
    top["rows"] = std::move(arr);
    emit(g, top.dump(2));
  } else {
    std::string out = "k,n,s,lower,value,upper,method,witness";
    for (const auto& r : rows) {
      out += "\n" + std::to_string(r.k) + "," + std::to_string(r.n) + "," + std::to_string(r.s) +
             "," + std::to_string(r.lower) + "," + (r.value ? std::to_string(*r.value) : "") +
             "," + std::to_string(r.upper) + "," + m_method_name(r.method) + "," +
             witness_text(r);
    }
    emit(g, out);
  }
  return 0;
}

json fk_payload(const field& F, const instance& inst, const fk_result& r) {
  json j;
  j["schema"] = schema_version;
  j["q"] = F.q();
  j["p"] = F.p();
  j["m"] = F.m();
  j["h"] = format_poly(F, inst.h);
  j["k"] = inst.k;
  j["ell"] = inst.pp.ell;
  j["n"] = inst.n;
  j["s"] = inst.s;
  j["m_kns"] = r.mrec.value ? json(*r.mrec.value) : json(nullptr);
  j["main_term"] = frac_json(r.main_term);
  j["mode"] = r.mode == fk_mode::exact ? "exact" : "bracket";
  j["value"] = r.value;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["witness_dlogs"] = r.witness.dlogs();
  j["defect"] = frac_json(r.defect);
  j["defect_over_sqrt_q"] =
      r.defect ? json(r.defect->to_double() / std::sqrt(static_cast<double>(F.q())))
               : json(nullptr);
  return j;
}

int run_fk_exact(const global_opts& g, u64 p, u32 m, const std::string& htext, u32 k,
                 const fk_caps& caps) {
  auto F = make_field(p, m);
  instance inst = build_instance(F, parse_poly(*F, htext), k, g.seed);
  std::optional<result_cache> cache;
  std::string key;
  if (!g.cache_path.empty()) {
    cache.emplace(g.cache_path);
    key = "fk-exact|p=" + std::to_string(p) + "|m=" + std::to_string(m) + "|mod=" +
          modulus_text(*F) + "|h=" + format_poly(*F, inst.h) + "|k=" + std::to_string(k) +
          "|caps=" + std::to_string(caps.pair_q_cap) + "." + std::to_string(caps.high_q_cap) +
          "." + std::to_string(caps.zn.certify_cap);
    if (!g.recheck) {
      if (auto hit = cache->lookup(key)) {
        emit(g, hit->dump(2));
        return 0;
      }
    }
  }
  fk_result r = exact_fk(inst, caps);
  json j = fk_payload(*F, inst, r);
  if (cache) {
    if (auto hit = cache->lookup(key)) {
      check(*hit == j, "cached result differs from recomputation for key '" + key + "'");
    } else {
      cache->store(key, j);
    }
  }
  emit(g, j.dump(2));
  return 0;
}

int run_fk_construct(const global_opts& g, u64 p, u32 m, const std::string& htext, u32 k) {
  auto F = make_field(p, m);
  instance inst = build_instance(F, parse_poly(*F, htext), k, g.seed);
  coset_construction_result cc = coset_construction(inst);
  json j;
  j["schema"] = schema_version;
  j["q"] = F->q();
  j["h"] = format_poly(*F, inst.h);
  j["k"] = k;
  j["n"] = inst.n;
  j["s"] = inst.s;
  j["m_kns"] = cc.mrec.value ? json(*cc.mrec.value) : json(nullptr);
  j["b0"] = cc.b0.elements();
  j["size"] = cc.a.size();
  j["witness_dlogs"] = cc.a.dlogs();
  emit(g, j.dump(2));
  return 0;
}

int run_fk_sweep(const global_opts& g, const std::vector<u64>& primes, u32 m,
                 const std::string& htext, u32 k, const fk_caps& caps) {
  require(!primes.empty(), errc::config_invalid, "need at least one prime");
  struct row {
    u64 q = 0, p = 0;
    u32 m = 0;
    std::string h;
    u32 k = 0, ell = 0;
    u64 n = 0, s = 0;
    std::optional<u64> mv;
    std::string mode;
    u64 value = 0, lower = 0, upper = 0;
    std::optional<frac> main_term, defect;
  };
  std::vector<row> rows = ordered_map(primes.size(), g.threads, [&](std::size_t i) {
    u64 p = primes[i];
    auto F = make_field(p, m);
    instance inst = build_instance(F, parse_poly(*F, htext), k, g.seed);
    fk_result r = exact_fk(inst, caps);
    return row{F->q(),
               p,
               m,
               format_poly(*F, inst.h),
               k,
               inst.pp.ell,
               inst.n,
               inst.s,
               r.mrec.value,
               r.mode == fk_mode::exact ? "exact" : "bracket",
               r.value,
               r.lower,
               r.upper,
               r.main_term,
               r.defect};
  });
  if (g.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json j;
      j["q"] = r.q;
      j["p"] = r.p;
      j["m"] = r.m;
      j["h"] = r.h;
      j["k"] = r.k;
      j["ell"] = r.ell;
      j["n"] = r.n;
      j["s"] = r.s;
      j["m_kns"] = r.mv ? json(*r.mv) : json(nullptr);
      j["mode"] = r.mode;
      j["value"] = r.value;
      j["lower"] = r.lower;
      j["upper"] = r.upper;
      j["main_term"] = frac_json(r.main_term);
      j["defect"] = frac_json(r.defect);
      j["defect_over_sqrt_q"] =
          r.defect ? json(r.defect->to_double() / std::sqrt(static_cast<double>(r.q)))
                   : json(nullptr);
      arr.push_back(std::move(j));
    }
    json top;
    top["schema"] = schema_version;
    top["rows"] = std::move(arr);
    emit(g, top.dump(2));
  } else {
    std::string out =
        "q,p,m,h,k,ell,n,s,m_kns,mode,value,lower,upper,main_term_num,main_term_den,defect,"
        "defect_over_sqrt_q";
    for (const auto& r : rows) {
      out += "\n" + std::to_string(r.q) + "," + std::to_string(r.p) + "," + std::to_string(r.m) +
             "," + csv_quote(r.h) + "," + std::to_string(r.k) + "," + std::to_string(r.ell) +
             "," + std::to_string(r.n) + "," + std::to_string(r.s) + "," +
             (r.mv ? std::to_string(*r.mv) : "") + "," + r.mode + "," + std::to_string(r.value) +
             "," + std::to_string(r.lower) + "," + std::to_string(r.upper) + "," +
             (r.main_term ? std::to_string(r.main_term->num) : "") + "," +
             (r.main_term ? std::to_string(r.main_term->den) : "") + "," +
             (r.defect ? r.defect->str() : "") + "," +
             (r.defect ? fmt6(r.defect->to_double() / std::sqrt(static_cast<double>(r.q))) : "");
    }
    emit(g, out);
  }
  return 0;
}

int run_structure(const global_opts& g, u64 p, u32 m, const std::string& htext, u32 k,
                  const std::string& set_text) {
  auto F = make_field(p, m);
  instance inst = build_instance(F, parse_poly(*F, htext), k, g.seed);
  unit_set A{bitvec(F->q1())};
  if (set_text.empty()) {
    A = exact_fk(inst).witness;
  } else {
    A = unit_set::from_dlogs(F->q1(), parse_u64_list(set_text));
  }
  structure_report rep = structure_distance(inst, A);
  json j;
  j["schema"] = schema_version;
  j["q"] = F->q();
  j["h"] = format_poly(*F, inst.h);
  j["k"] = k;
  j["n"] = inst.n;
  j["s"] = inst.s;
  j["set_dlogs"] = A.dlogs();
  j["coset_sizes"] = rep.coset_sizes;
  j["b0"] = rep.best_b0.elements();
  j["distance"] = rep.distance;
  emit(g, j.dump(2));
  return 0;
}

json subfield_json(const subfield_construction& c, u64 p, u32 m, u32 k) {
  json j;
  j["schema"] = schema_version;
  j["p"] = p;
  j["m"] = m;
  j["q"] = c.F->q();
  j["k"] = k;
  j["h"] = format_poly(*c.F, c.inst.h);
  j["t"] = c.t;
  j["alpha"] = format_elt(*c.F, c.alpha);
  j["u"] = format_elt(*c.F, c.u);
  j["n"] = c.inst.n;
  j["s"] = c.inst.s;
  j["set_dlogs"] = c.a.dlogs();
  j["star_ok"] = c.star_ok;
  j["sum_bound_ok"] = c.sum_bound_ok;
  j["subfield_power_check"] = c.subfield_power_check;
  return j;
}

int run_remark3(const global_opts& g, u64 p, u32 k) {
  subfield_construction c = sqrt_subfield_construction(p, k, {}, g.seed);
  emit(g, subfield_json(c, p, 2, k).dump(2));
  return (c.star_ok && c.sum_bound_ok && c.subfield_power_check) ? 0 : 1;
}

int run_remark4(const global_opts& g, u64 p, u32 m, u32 k) {
  subfield_construction c = qroot_subfield_construction(p, m, k, {}, g.seed);
  emit(g, subfield_json(c, p, m, k).dump(2));
  return (c.star_ok && c.subfield_power_check) ? 0 : 1;
}

int run_verify_all(const global_opts& g, const std::string& only_text) {
  acceptance_options opt;
  opt.threads = g.threads;
  opt.seed = g.seed;
  if (!only_text.empty())
    for (u64 id : parse_u64_list(only_text)) opt.only.push_back(static_cast<int>(id));
  const bool stream = g.format != "json" && g.output.empty();
  std::string lines;
  acceptance_report rep = run_acceptance(opt, [&](const criterion_result& r) {
    std::string line = format_criterion_line(r);
    lines += line + "\n";
    if (stream) std::cout << line << "\n" << std::flush;
  });
  std::string verdict = rep.all_pass ? "all criteria passed" : "FAILURES present";
  if (g.format == "json") {
    json arr = json::array();
    for (const auto& r : rep.results)
      arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    json top;
    top["schema"] = schema_version;
    top["all_pass"] = rep.all_pass;
    top["criteria"] = std::move(arr);
    emit(g, top.dump(2));
  } else if (stream) {
    std::cout << verdict << "\n";
  } else {
    emit(g, lines + verdict);
  }
  return rep.all_pass ? 0 : 1;
}

// Fills an unset option from a config file's top-level key of the same name.
template <typename T>
void config_default(const CLI::Option* opt, const config& c, const std::string& key, T& target) {
  if (opt->count() > 0 || !c.has("", key)) return;
  const std::string& v = c.get("", key);
  if constexpr (std::is_same_v<T, std::string>) {
    target = v;
  } else if constexpr (std::is_same_v<T, double>) {
    target = std::stod(v);
  } else if constexpr (std::is_same_v<T, std::vector<u64>>) {
    target = parse_u64_list(v);
  } else {
    target = static_cast<T>(std::stoull(v));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"product-free subsets of finite-field unit groups"};
  app.set_version_flag("--version", std::string(version_string));
  app.require_subcommand(1);
  // help is --help only, freeing the name "h" for polynomial options
  app.set_help_flag("--help", "print help and exit");
  auto add_sub = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "print help and exit");
    sub->fallthrough();  // global options may follow the subcommand name
    return sub;
  };

  global_opts g;
  app.add_option("--cache", g.cache_path, "append-only result cache (JSON lines)");
  app.add_option("--output", g.output, "write the report to a file instead of stdout");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "seed for randomized factorization steps");
  app.add_option("--threads", g.threads, "worker threads for sweeps");
  app.add_flag("--recheck", g.recheck, "recompute cached results and compare");

  int rc = 0;

  // field-info
  u64 fi_p = 0;
  u32 fi_m = 1;
  auto* sub_fi = add_sub("field-info", "modulus, generator and unit-group data");
  sub_fi->add_option("-p,--p", fi_p, "characteristic")->required();
  sub_fi->add_option("-m,--m", fi_m, "extension degree");
  sub_fi->callback([&] { rc = run_field_info(g, fi_p, fi_m); });

  // power-part
  u64 pp_p = 0;
  u32 pp_m = 1;
  std::string pp_h;
  auto* sub_pp = add_sub("power-part", "write h = c f^ell with ell maximal");
  sub_pp->add_option("-p,--p", pp_p, "characteristic")->required();
  sub_pp->add_option("-m,--m", pp_m, "extension degree");
  sub_pp->add_option("--h", pp_h, "polynomial, constant coefficient first")->required();
  sub_pp->callback([&] { rc = run_power_part(g, pp_p, pp_m, pp_h); });

  // value-set
  u64 vs_p = 0;
  u32 vs_m = 1;
  std::string vs_h;
  auto* sub_vs = add_sub("value-set", "all values h(x), x in F_q");
  sub_vs->add_option("-p,--p", vs_p, "characteristic")->required();
  sub_vs->add_option("-m,--m", vs_m, "extension degree");
  sub_vs->add_option("--h", vs_h, "polynomial, constant coefficient first")->required();
  sub_vs->callback([&] { rc = run_value_set(g, vs_p, vs_m, vs_h); });

  // weil-verify
  u64 wv_p = 0;
  u32 wv_m = 1;
  std::string wv_f, wv_config;
  double wv_tol = 1e-6;
  auto* sub_wv = add_sub(
      "weil-verify", "check square-root cancellation of character sums exhaustively");
  auto* wv_p_opt = sub_wv->add_option("-p,--p", wv_p, "characteristic");
  auto* wv_m_opt = sub_wv->add_option("-m,--m", wv_m, "extension degree");
  auto* wv_f_opt = sub_wv->add_option("--f", wv_f, "monic polynomial to test");
  auto* wv_tol_opt = sub_wv->add_option("--tol", wv_tol, "numerical tolerance");
  sub_wv->add_option("--config", wv_config, "config file supplying defaults");
  sub_wv->callback([&] {
    if (!wv_config.empty()) {
      config c = load_config_file(wv_config);
      config_default(wv_p_opt, c, "p", wv_p);
      config_default(wv_m_opt, c, "m", wv_m);
      config_default(wv_f_opt, c, "f", wv_f);
      config_default(wv_tol_opt, c, "tol", wv_tol);
    }
    require(wv_p != 0, errc::config_invalid, "weil-verify needs -p or a config file with p");
    require(!wv_f.empty(), errc::config_invalid, "weil-verify needs --f or a config file with f");
    rc = run_weil(g, wv_p, wv_m, wv_f, wv_tol);
  });

  // m-exact
  u32 me_k = 0, me_n = 0, me_s = 0, me_cap = 28;
  auto* sub_me = add_sub("m-exact", "extremal avoiding-set size in Z_n by search");
  sub_me->add_option("-k,--k", me_k, "number of summands")->required();
  sub_me->add_option("-n,--n", me_n, "modulus")->required();
  sub_me->add_option("-s,--s", me_s, "forbidden sum class")->required();
  sub_me->add_option("--cap", me_cap, "largest n the exhaustive search accepts");
  sub_me->callback([&] { rc = run_m_exact(g, me_k, me_n, me_s, me_cap); });

  // m-table
  u32 mt_k = 2, mt_nmin = 1, mt_nmax = 12, mt_cap = 28;
  std::string mt_s = "all", mt_config;
  auto* sub_mt = add_sub("m-table", "tabulate extremal sizes over a range of n");
  auto* mt_k_opt = sub_mt->add_option("-k,--k", mt_k, "number of summands");
  auto* mt_nmin_opt = sub_mt->add_option("--n-min", mt_nmin, "first modulus");
  auto* mt_nmax_opt = sub_mt->add_option("--n-max", mt_nmax, "last modulus");
  auto* mt_s_opt = sub_mt->add_option("--s", mt_s, "forbidden class, or 'all'");
  auto* mt_cap_opt = sub_mt->add_option("--cap", mt_cap, "exhaustive search cap");
  sub_mt->add_option("--config", mt_config, "config file supplying defaults");
  sub_mt->callback([&] {
    if (!mt_config.empty()) {
      config c = load_config_file(mt_config);
      config_default(mt_k_opt, c, "k", mt_k);
      config_default(mt_nmin_opt, c, "n_min", mt_nmin);
      config_default(mt_nmax_opt, c, "n_max", mt_nmax);
      config_default(mt_s_opt, c, "s", mt_s);
      config_default(mt_cap_opt, c, "cap", mt_cap);
    }
    rc = run_m_table(g, mt_k, mt_nmin, mt_nmax, mt_s, mt_cap);
  });

  // fk-exact
  u64 fe_p = 0;
  u32 fe_m = 1, fe_k = 2;
  std::string fe_h;
  fk_caps fe_caps;
  auto* sub_fe = add_sub("fk-exact",
                                    "largest star set for (q, h, k), exact or bracketed");
  sub_fe->add_option("-p,--p", fe_p, "characteristic")->required();
  sub_fe->add_option("-m,--m", fe_m, "extension degree");
  sub_fe->add_option("--h", fe_h, "polynomial, constant coefficient first")->required();
  sub_fe->add_option("-k,--k", fe_k, "product length");
  sub_fe->add_option("--pair-cap", fe_caps.pair_q_cap, "exact-search cap on q for k = 2");
  sub_fe->add_option("--high-cap", fe_caps.high_q_cap, "exact-search cap on q for k >= 3");
  sub_fe->add_option("--zn-cap", fe_caps.zn.certify_cap, "exhaustive cap on the Z_n side");
  sub_fe->callback([&] { rc = run_fk_exact(g, fe_p, fe_m, fe_h, fe_k, fe_caps); });

  // fk-construct
  u64 fc_p = 0;
  u32 fc_m = 1, fc_k = 2;
  std::string fc_h;
  auto* sub_fc = add_sub("fk-construct", "coset-union star set from a Z_n witness");
  sub_fc->add_option("-p,--p", fc_p, "characteristic")->required();
  sub_fc->add_option("-m,--m", fc_m, "extension degree");
  sub_fc->add_option("--h", fc_h, "polynomial, constant coefficient first")->required();
  sub_fc->add_option("-k,--k", fc_k, "product length");
  sub_fc->callback([&] { rc = run_fk_construct(g, fc_p, fc_m, fc_h, fc_k); });

  // fk-sweep
  std::vector<u64> fs_primes;
  u32 fs_m = 1, fs_k = 2;
  std::string fs_h, fs_config;
  fk_caps fs_caps;
  auto* sub_fs = add_sub("fk-sweep", "run fk-exact across a list of characteristics");
  auto* fs_primes_opt =
      sub_fs->add_option("--primes", fs_primes, "comma-separated characteristics")->delimiter(',');
  auto* fs_m_opt = sub_fs->add_option("-m,--m", fs_m, "extension degree");
  auto* fs_h_opt = sub_fs->add_option("--h", fs_h, "polynomial, constant coefficient first");
  auto* fs_k_opt = sub_fs->add_option("-k,--k", fs_k, "product length");
  sub_fs->add_option("--pair-cap", fs_caps.pair_q_cap, "exact-search cap on q for k = 2");
  sub_fs->add_option("--high-cap", fs_caps.high_q_cap, "exact-search cap on q for k >= 3");
  sub_fs->add_option("--config", fs_config, "config file supplying defaults");
  sub_fs->callback([&] {
    if (!fs_config.empty()) {
      config c = load_config_file(fs_config);
      config_default(fs_primes_opt, c, "primes", fs_primes);
      config_default(fs_m_opt, c, "m", fs_m);
      config_default(fs_h_opt, c, "h", fs_h);
      config_default(fs_k_opt, c, "k", fs_k);
    }
    require(!fs_h.empty(), errc::config_invalid, "fk-sweep needs --h or a config file with h");
    rc = run_fk_sweep(g, fs_primes, fs_m, fs_h, fs_k, fs_caps);
  });

  // structure-distance
  u64 sd_p = 0;
  u32 sd_m = 1, sd_k = 2;
  std::string sd_h, sd_set;
  auto* sub_sd = add_sub("structure-distance",
                                    "edit distance from a star set to the nearest coset union");
  sub_sd->add_option("-p,--p", sd_p, "characteristic")->required();
  sub_sd->add_option("-m,--m", sd_m, "extension degree");
  sub_sd->add_option("--h", sd_h, "polynomial, constant coefficient first")->required();
  sub_sd->add_option("-k,--k", sd_k, "product length");
  sub_sd->add_option("--set", sd_set,
                     "comma-separated dlogs of the set (default: the extremal witness)");
  sub_sd->callback([&] { rc = run_structure(g, sd_p, sd_m, sd_h, sd_k, sd_set); });

  // remark3
  u64 r3_p = 0;
  u32 r3_k = 2;
  auto* sub_r3 = add_sub(
      "remark3", "square-root-of-q star set in the quadratic extension of F_p");
  sub_r3->add_option("-p,--p", r3_p, "odd prime")->required();
  sub_r3->add_option("-k,--k", r3_k, "product length");
  sub_r3->callback([&] { rc = run_remark3(g, r3_p, r3_k); });

  // remark4
  u64 r4_p = 0;
  u32 r4_m = 3, r4_k = 2;
  auto* sub_r4 = add_sub(
      "remark4", "q^(1/m)-sized star set from the prime subfield of F_{p^m}");
  sub_r4->add_option("-p,--p", r4_p, "prime with p = 1 mod m")->required();
  sub_r4->add_option("-m,--m", r4_m, "extension degree (at least 3)");
  sub_r4->add_option("-k,--k", r4_k, "product length");
  sub_r4->callback([&] { rc = run_remark4(g, r4_p, r4_m, r4_k); });

  // verify-all
  std::string va_only;
  auto* sub_va = add_sub("verify-all", "run the acceptance checklist");
  sub_va->add_option("--only", va_only, "comma-separated criterion ids");
  sub_va->callback([&] { rc = run_verify_all(g, va_only); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::config_invalid ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
