// Command-line front end for the concordance-invariant library.
//
// Subcommands build and validate bifiltered complexes, compute the
// region-parameterized invariants (upsilon, tau, V-type / surgery d),
// emit branched-cover grid slices and algebraic model complexes, lift
// doubly-filtered data to cyclic covers, and run the sliceness /
// finite-order / independence obstruction drivers.
//
// Exit codes: 0 success or a passing check; 1 usage or I/O error;
// 2 an obstruction, mismatch, or failed validation was found;
// 3 internal invariant violation (the message names the invariant).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ups/complex_core.hpp"
#include "ups/concordance.hpp"
#include "ups/grid.hpp"
#include "ups/json_io.hpp"
#include "ups/models.hpp"
#include "ups/oneone.hpp"
#include "ups/regions.hpp"
#include "ups/upsilon.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kObstructed = 2;
constexpr int kInvariant = 3;

// Set when a complex was loaded from user-supplied JSON, so that knot-type
// failures in it are reported as bad input rather than internal bugs.
bool g_user_complex = false;

std::int64_t search_cap() {
  const char* s = std::getenv("UPSILON_CAP");
  if (!s) return 10000;
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != std::string(s).size() || v < 1)
      throw std::invalid_argument("bad");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("UPSILON_CAP is not a positive integer: ") + s);
  }
}

// ---------------------------------------------------------------------------
// I/O helpers over the library's JSON interchange

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << content;
}

std::string dump_json(const ordered_json& j) { return ups::dump_deterministic(j); }

// Errors while reading or decoding user files are usage errors, not bugs:
// remap them onto invalid_argument so they exit with the usage status.
template <class F>
auto decode_arg(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

ups::json read_json_arg(const std::string& path) {
  return decode_arg(path, [&] { return ups::read_json_file(path); });
}

ups::KnotComplex read_complex_file(const std::string& path) {
  return decode_arg(path, [&] { return ups::complex_from_json(read_json_arg(path)); });
}

ups::SouthWestRegion read_region_file(const std::string& path) {
  return decode_arg(path, [&] { return ups::region_from_json(read_json_arg(path)); });
}

ups::KnotComplex load_complex_file(const std::string& path) {
  ups::KnotComplex K = read_complex_file(path);
  auto problems = ups::validate(K);
  if (!problems.empty())
    throw std::invalid_argument(path + ": invalid complex: " + problems.front());
  g_user_complex = true;
  return K;
}

ordered_json complex_to_json_arg(const ups::KnotComplex& K) {
  try {
    return ups::complex_to_json(K);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
}

// ---------------------------------------------------------------------------
// Complex sources shared by the invariant subcommands

ups::KnotComplex family_complex(const std::string& family, int n) {
  if (family == "unknot") return ups::torus_staircase(0);
  if (n < 0) throw std::invalid_argument("--family " + family + " needs --n");
  if (family == "torus") return ups::torus_staircase(n);
  if (family == "twist") return ups::twist_complex(n);
  throw std::invalid_argument("unknown family: " + family);
}

ups::KnotComplex complex_from_source(const std::string& family, int n,
                                     const std::string& path, int grid_p,
                                     int spinc) {
  int sources = (!family.empty() ? 1 : 0) + (!path.empty() ? 1 : 0) + (grid_p ? 1 : 0);
  if (sources != 1)
    throw std::invalid_argument(
        "choose exactly one complex source: --family, --complex, or --grid-p");
  if (!family.empty()) return family_complex(family, n);
  if (!path.empty()) return load_complex_file(path);
  return ups::spinc_slice(ups::make_grid(grid_p), spinc);
}

// ---------------------------------------------------------------------------
// Upsilon maps for the obstruction drivers

ups::GroupElement parse_element_key(const std::string& key) {
  ups::GroupElement e;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ','))
    e.push_back(std::stoll(part));
  if (e.empty()) throw std::invalid_argument("empty group-element key");
  return e;
}

ups::UpsilonMap map_from_file(const std::string& path,
                              const std::vector<std::int64_t>& group_flag) {
  auto j = read_json_arg(path);
  std::vector<std::int64_t> orders;
  if (j.contains("group")) orders = j.at("group").get<std::vector<std::int64_t>>();
  if (!group_flag.empty()) {
    if (!orders.empty() && orders != group_flag)
      throw std::invalid_argument("--group disagrees with the \"group\" in " + path);
    orders = group_flag;
  }
  if (orders.empty())
    throw std::invalid_argument("no group given: add \"group\" to " + path + " or pass --group");
  auto H = ups::make_group(orders);
  std::map<ups::GroupElement, ups::PiecewiseLinear> fns;
  try {
    for (const auto& [key, jv] : j.at("upsilon").items()) {
      ups::PiecewiseLinear f;
      for (const auto& bp : jv)
        f.breakpoints.push_back({ups::rat_from_json(bp.at(0)), ups::rat_from_json(bp.at(1))});
      fns[parse_element_key(key)] = f;
    }
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return ups::make_upsilon_map(H, fns);
}

// Upsilon map of the p-fold cover family: one slice per symmetric class.
ups::UpsilonMap map_from_grid(int p) {
  auto G = ups::make_grid(p);
  auto H = ups::make_group({p});
  std::map<ups::GroupElement, ups::PiecewiseLinear> fns;
  for (int h = 0; h <= (p - 1) / 2; ++h)
    fns[{h}] = ups::upsilon_function(ups::spinc_slice(G, h));
  return ups::make_upsilon_map(H, fns);
}

std::string element_str(const ups::GroupElement& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// Fuzz driver: deterministic random complexes, checked against the
// structural axioms and the dual / tensor behavior of the invariants.

int run_fuzz(int count, std::uint64_t seed, int max_gens) {
  ups::KnotComplex prev;
  for (int i = 0; i < count; ++i) {
    ups::KnotComplex K =
        ups::random_knot_complex(seed + static_cast<std::uint64_t>(i),
                                 static_cast<std::size_t>(max_gens));
    auto problems = ups::validate(K);
    if (!problems.empty()) {
      std::cerr << "internal invariant violation: fuzz complex " << i
                << " fails validation: " << problems.front() << "\n";
      return kInvariant;
    }
    ups::PiecewiseLinear f = ups::upsilon_function(K);
    ups::PiecewiseLinear fd = ups::upsilon_function(ups::dual(K));
    if (!ups::piecewise_equal(fd, ups::piecewise_negate(f))) {
      std::cerr << "internal invariant violation: fuzz complex " << i
                << ": upsilon of the dual is not the negation\n";
      return kInvariant;
    }
    if (ups::tau(ups::dual(K)) != -ups::tau(K)) {
      std::cerr << "internal invariant violation: fuzz complex " << i
                << ": tau of the dual is not the negation\n";
      return kInvariant;
    }
    if (i % 2 == 1) {
      ups::KnotComplex T = ups::tensor(prev, K);
      if (!ups::validate(T).empty()) {
        std::cerr << "internal invariant violation: fuzz tensor " << i - 1
                  << "*" << i << " fails validation\n";
        return kInvariant;
      }
      ups::PiecewiseLinear sum =
          ups::piecewise_add(ups::upsilon_function(prev), f);
      if (!ups::piecewise_equal(ups::upsilon_function(T), sum)) {
        std::cerr << "internal invariant violation: fuzz tensor " << i - 1
                  << "*" << i << ": upsilon is not additive\n";
        return kInvariant;
      }
    }
    prev = K;
  }
  std::cout << "fuzz: " << count << " complexes checked (seed " << seed << ")\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Concordance invariants of bifiltered complexes: upsilon, tau, V-type\n"
      "correction terms, branched-cover grid slices, model complexes, cover\n"
      "lifts, and sliceness / finite-order / independence obstructions."};
  app.require_subcommand(1);
  app.footer(
      "Environment:\n"
      "  UPSILON_CAP   overrides the subgroup-search cap (default 10000)\n"
      "Exit codes: 0 ok/pass, 1 usage or I/O error, 2 obstruction or\n"
      "mismatch found, 3 internal invariant violation.");

  // --- build ---------------------------------------------------------------
  std::string b_family, b_in, b_tensor, b_sum, b_out;
  int b_n = -1;
  bool b_dual = false;
  auto* cmd_build = app.add_subcommand(
      "build", "Build a complex and write it as JSON");
  cmd_build->add_option("--family", b_family, "Named family: torus, twist, or unknot")
      ->check(CLI::IsMember({"torus", "twist", "unknot"}));
  cmd_build->add_option("--n", b_n, "Family parameter");
  cmd_build->add_option("--in", b_in, "Read the base complex from a JSON file");
  cmd_build->add_flag("--dual", b_dual, "Dualize the base complex");
  cmd_build->add_option("--tensor", b_tensor, "Tensor with the complex in this JSON file");
  cmd_build->add_option("--sum", b_sum, "Direct sum with the complex in this JSON file");
  cmd_build->add_option("--out", b_out, "Output path (default: stdout)");

  // --- validate --------------------------------------------------------------
  std::string v_family, v_in;
  int v_n = -1, v_fuzz = 0, v_max_gens = 8;
  std::uint64_t v_seed = 0;
  auto* cmd_validate = app.add_subcommand(
      "validate", "Check the structural axioms of a complex, or fuzz the library");
  cmd_validate->add_option("--in", v_in, "Complex JSON file to validate");
  cmd_validate->add_option("--family", v_family, "Named family: torus, twist, or unknot")
      ->check(CLI::IsMember({"torus", "twist", "unknot"}));
  cmd_validate->add_option("--n", v_n, "Family parameter");
  cmd_validate->add_option("--fuzz", v_fuzz,
                           "Check N deterministic random complexes instead");
  cmd_validate->add_option("--seed", v_seed, "Seed for the fuzz driver (default 0)");
  cmd_validate->add_option("--max-gens", v_max_gens,
                           "Generator cap for fuzzed complexes (default 8)");

  // --- upsilon ---------------------------------------------------------------
  std::string u_family, u_complex, u_region = "ht-sweep", u_out;
  int u_n = -1, u_grid_p = 0, u_spinc = 0;
  auto* cmd_upsilon = app.add_subcommand(
      "upsilon", "Evaluate the one-parameter invariant, as CSV");
  cmd_upsilon->add_option("--family", u_family, "Named family: torus, twist, or unknot")
      ->check(CLI::IsMember({"torus", "twist", "unknot"}));
  cmd_upsilon->add_option("--n", u_n, "Family parameter");
  cmd_upsilon->add_option("--complex", u_complex, "Complex JSON file");
  cmd_upsilon->add_option("--grid-p", u_grid_p, "Use the cover grid slice for this odd p");
  cmd_upsilon->add_option("--spinc", u_spinc, "Slice class for --grid-p (default 0)");
  cmd_upsilon->add_option(
      "--region", u_region,
      "ht-sweep (full piecewise function), ht:<t> (one half-plane value), "
      "or a region JSON file");
  cmd_upsilon->add_option("--out", u_out, "Output path (default: stdout)");

  // --- tau -------------------------------------------------------------------
  std::string t_family, t_complex;
  int t_n = -1, t_grid_p = 0;
  std::vector<int> t_spincs;
  bool t_parallel = false;
  auto* cmd_tau = app.add_subcommand("tau", "Initial-slope concordance invariant");
  cmd_tau->add_option("--family", t_family, "Named family: torus, twist, or unknot")
      ->check(CLI::IsMember({"torus", "twist", "unknot"}));
  cmd_tau->add_option("--n", t_n, "Family parameter");
  cmd_tau->add_option("--complex", t_complex, "Complex JSON file");
  cmd_tau->add_option("--grid-p", t_grid_p, "Cover grid parameter (odd, >= 3)");
  cmd_tau->add_option("--spinc", t_spincs,
                      "Slice classes for --grid-p, comma separated")
      ->delimiter(',');
  cmd_tau->add_flag("--parallel", t_parallel, "Compute the slice classes concurrently");

  // --- v ----------------------------------------------------------------------
  std::string vv_family, vv_complex;
  int vv_n = -1, vv_grid_p = 0, vv_spinc = 0;
  std::int64_t vv_m = 0, vv_q = 0;
  auto* cmd_v = app.add_subcommand(
      "v", "V-type correction term, optionally as a surgery d-invariant");
  cmd_v->add_option("--family", vv_family, "Named family: torus, twist, or unknot")
      ->check(CLI::IsMember({"torus", "twist", "unknot"}));
  cmd_v->add_option("--n", vv_n, "Family parameter");
  cmd_v->add_option("--complex", vv_complex, "Complex JSON file");
  cmd_v->add_option("--grid-p", vv_grid_p, "Use the cover grid slice for this odd p");
  cmd_v->add_option("--spinc", vv_spinc, "Slice class for --grid-p (default 0)");
  cmd_v->add_option("--m", vv_m, "Threshold index m >= 0 (default 0)");
  cmd_v->add_option("--surgery", vv_q,
                    "Also fold into the d-invariant of q-framed surgery");

  // --- grid --------------------------------------------------------------------
  std::vector<int> g_ps;
  bool g_check = false, g_parallel = false;
  int g_spinc = 0;
  std::string g_emit;
  auto* cmd_grid = app.add_subcommand(
      "grid", "Twisted cylinder grids of the branched-cover family");
  cmd_grid->add_option("--p", g_ps, "Odd grid parameters (comma separated)")
      ->delimiter(',')
      ->required();
  cmd_grid->add_flag("--check-differentials", g_check,
                     "Verify the counted differential against the closed form");
  cmd_grid->add_option("--spinc", g_spinc, "Emit the reduced slice in this class");
  cmd_grid
      ->add_flag("--parallel", g_parallel, "Check the listed parameters concurrently");
  cmd_grid->add_option("--emit", g_emit, "Output path for the slice JSON (default: stdout)");

  // --- models --------------------------------------------------------------------
  std::vector<int> m_fused;
  std::string m_emit;
  bool m_knot_form = false;
  auto* cmd_models = app.add_subcommand(
      "models", "Algebraic pole/wire model complexes");
  cmd_models->add_option("--fused", m_fused, "Pole and wire sizes e,w")
      ->delimiter(',')
      ->required();
  cmd_models->add_flag(
      "--knot-form", m_knot_form,
      "Emit the knot-type complex the model represents (poles shortened away)");
  cmd_models->add_option("--emit", m_emit, "Output path (default: stdout)");

  // --- lift -------------------------------------------------------------------
  std::string l_family;
  int l_n = -1, l_p = 0;
  std::string l_table, l_s0;
  bool l_zero = false;
  auto* cmd_lift = app.add_subcommand(
      "lift", "Lift a doubly-filtered complex to a cyclic cover");
  cmd_lift->add_option("--family", l_family, "Named family: torus or twist")
      ->check(CLI::IsMember({"torus", "twist"}))
      ->required();
  cmd_lift->add_option("--n", l_n, "Family parameter")->required();
  cmd_lift->add_option("--p", l_p, "Cover order (default 2n+1)");
  cmd_lift->add_option("--table", l_table, "Write the lift table CSV here");
  cmd_lift->add_option("--s0", l_s0, "Write the central-class subcomplex JSON here");
  cmd_lift->add_flag("--zero-classes", l_zero,
                     "Print the classes whose lifted filtration sums to zero");

  // --- obstruct ------------------------------------------------------------------
  auto* cmd_obstruct = app.add_subcommand(
      "obstruct", "Concordance obstructions from an upsilon map");
  cmd_obstruct->require_subcommand(1);

  std::string os_map;
  std::vector<std::int64_t> os_group;
  int os_grid_p = 0;
  std::int64_t os_det = 0;
  auto* cmd_os = cmd_obstruct->add_subcommand(
      "slice", "Square-root-subgroup sliceness test");
  cmd_os->add_option("--upsilon-map", os_map, "Map JSON: {\"group\": [...], \"upsilon\": {...}}");
  cmd_os->add_option("--group", os_group, "Cyclic factors of the group, comma separated")
      ->delimiter(',');
  cmd_os->add_option("--grid-p", os_grid_p, "Use the cover grid family map for this odd p");
  cmd_os->add_option("--det", os_det,
                     "Cross-check: expected branched-cover determinant");

  std::string oo_map, oo_t = "1";
  int oo_grid_p = 0;
  std::int64_t oo_p = 0;
  auto* cmd_oo = cmd_obstruct->add_subcommand(
      "order", "Finite-order criterion over order-p subgroups");
  cmd_oo->add_option("--upsilon-map", oo_map, "Map JSON file");
  cmd_oo->add_option("--grid-p", oo_grid_p, "Use the cover grid family map for this odd p");
  cmd_oo->add_option("--p", oo_p, "Subgroup order (prime)")->required();
  cmd_oo->add_option("--t", oo_t, "Evaluation parameter in [0,2] (default 1)");

  std::vector<std::int64_t> oi_primes{3, 5, 7};
  int oi_bound = 3;
  auto* cmd_oi = cmd_obstruct->add_subcommand(
      "independence", "Reject integer relations among a family of covers");
  cmd_oi->add_option("--primes", oi_primes,
                     "Odd prime cover orders (default 3,5,7)")
      ->delimiter(',');
  cmd_oi->add_option("--bound", oi_bound, "Coefficient bound (default 3)");

  // --- compare ----------------------------------------------------------------
  std::string c_a, c_b;
  bool c_iso = false;
  auto* cmd_compare = app.add_subcommand(
      "compare", "Compare two complexes by invariants, optionally by graded iso");
  cmd_compare->add_option("--a", c_a, "First complex JSON file")->required();
  cmd_compare->add_option("--b", c_b, "Second complex JSON file")->required();
  cmd_compare->add_flag("--iso",
                        c_iso, "Also require a graded isomorphism (up to overall shift)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    // --- build ---
    if (cmd_build->parsed()) {
      ups::KnotComplex K = complex_from_source(b_family, b_n, b_in, 0, 0);
      if (b_dual) K = ups::dual(K);
      if (!b_tensor.empty()) K = ups::tensor(K, load_complex_file(b_tensor));
      if (!b_sum.empty()) K = ups::direct_sum(K, load_complex_file(b_sum));
      auto problems = ups::validate(K);
      if (!problems.empty())
        throw std::runtime_error("built complex fails validation: " + problems.front());
      write_output(b_out, dump_json(complex_to_json_arg(K)));
      return kOk;
    }

    // --- validate ---
    if (cmd_validate->parsed()) {
      if (v_fuzz > 0) return run_fuzz(v_fuzz, v_seed, v_max_gens);
      ups::KnotComplex K;
      if (!v_in.empty()) {
        // Load without the validity gate: reporting problems is the job here.
        K = read_complex_file(v_in);
      } else if (!v_family.empty()) {
        K = family_complex(v_family, v_n);
      } else {
        throw std::invalid_argument("give --in, --family, or --fuzz");
      }
      auto problems = ups::validate(K);
      for (const auto& p : problems) std::cout << "invalid: " << p << "\n";
      if (problems.empty()) std::cout << "ok\n";
      return problems.empty() ? kOk : kObstructed;
    }

    // --- upsilon ---
    if (cmd_upsilon->parsed()) {
      ups::KnotComplex K =
          complex_from_source(u_family, u_n, u_complex, u_grid_p, u_spinc);
      std::string csv;
      if (u_region == "ht-sweep") {
        csv = ups::piecewise_to_csv(ups::upsilon_function(K));
      } else if (u_region.rfind("ht:", 0) == 0) {
        ups::Rat t = ups::Rat::parse(u_region.substr(3));
        ups::Rat val = ups::Rat(-2) * ups::upsilon_region(K, ups::halfplane_t(t));
        csv = "t,value\n" + t.str() + "," + val.str() + "\n";
      } else {
        auto C = read_region_file(u_region);
        ups::Rat val = ups::Rat(-2) * ups::upsilon_region(K, C);
        csv = "value\n" + val.str() + "\n";
      }
      write_output(u_out, csv);
      return kOk;
    }

    // --- tau ---
    if (cmd_tau->parsed()) {
      if (t_grid_p) {
        if (t_spincs.empty()) throw std::invalid_argument("--grid-p needs --spinc");
        std::vector<ups::Rat> vals(t_spincs.size());
        if (t_parallel) {
          std::vector<std::future<ups::Rat>> futs;
          for (int h : t_spincs) {
            int p = t_grid_p;
            futs.push_back(std::async(std::launch::async, [p, h] {
              return ups::tau(ups::spinc_slice(ups::make_grid(p), h));
            }));
          }
          for (std::size_t i = 0; i < futs.size(); ++i) vals[i] = futs[i].get();
        } else {
          auto G = ups::make_grid(t_grid_p);
          for (std::size_t i = 0; i < t_spincs.size(); ++i)
            vals[i] = ups::tau(ups::spinc_slice(G, t_spincs[i]));
        }
        std::string out;
        for (std::size_t i = 0; i < vals.size(); ++i) {
          if (i) out += ",";
          out += vals[i].str();
        }
        std::cout << out << "\n";
        return kOk;
      }
      ups::KnotComplex K = complex_from_source(t_family, t_n, t_complex, 0, 0);
      std::cout << ups::tau(K).str() << "\n";
      return kOk;
    }

    // --- v ---
    if (cmd_v->parsed()) {
      ups::KnotComplex K =
          complex_from_source(vv_family, vv_n, vv_complex, vv_grid_p, vv_spinc);
      ups::Rat v = ups::v_invariant(K, vv_m);
      if (cmd_v->count("--surgery") > 0)
        v = ups::surgery_d(vv_q, vv_m, v);
      std::cout << v.str() << "\n";
      return kOk;
    }

    // --- grid ---
    if (cmd_grid->parsed()) {
      if (g_check) {
        std::vector<std::vector<std::string>> problems(g_ps.size());
        if (g_parallel) {
          std::vector<std::future<std::vector<std::string>>> futs;
          for (int p : g_ps)
            futs.push_back(std::async(std::launch::async,
                                      [p] { return ups::check_differentials(p); }));
          for (std::size_t i = 0; i < futs.size(); ++i) problems[i] = futs[i].get();
        } else {
          for (std::size_t i = 0; i < g_ps.size(); ++i)
            problems[i] = ups::check_differentials(g_ps[i]);
        }
        bool bad = false;
        for (std::size_t i = 0; i < g_ps.size(); ++i) {
          if (problems[i].empty()) {
            std::cout << "p=" << g_ps[i] << ": ok ("
                      << ups::grid_generators(g_ps[i]).size() << " generators)\n";
          } else {
            bad = true;
            for (const auto& pr : problems[i])
              std::cerr << "p=" << g_ps[i] << ": " << pr << "\n";
          }
        }
        if (bad) {
          std::cerr << "internal invariant violation: counted and closed-form "
                       "differentials disagree\n";
          return kInvariant;
        }
        return kOk;
      }
      if (cmd_grid->count("--spinc") > 0) {
        if (g_ps.size() != 1)
          throw std::invalid_argument("--spinc emission needs exactly one --p");
        ups::KnotComplex K = ups::spinc_slice(ups::make_grid(g_ps[0]), g_spinc);
        write_output(g_emit, dump_json(complex_to_json_arg(K)));
        return kOk;
      }
      throw std::invalid_argument("give --check-differentials or --spinc");
    }

    // --- models ---
    if (cmd_models->parsed()) {
      if (m_fused.size() != 2)
        throw std::invalid_argument("--fused needs two integers e,w");
      ups::ModelComplex Mo = ups::make_fused(m_fused[0], m_fused[1]);
      ups::KnotComplex K =
          m_knot_form ? ups::model_knot_form(Mo) : ups::specialize(Mo);
      write_output(m_emit, dump_json(complex_to_json_arg(K)));
      return kOk;
    }

    // --- lift ---
    if (cmd_lift->parsed()) {
      ups::OneOneComplex O = l_family == "torus" ? ups::torus_oneone(l_n)
                                                 : ups::twist_oneone(l_n);
      int p = l_p ? l_p : 2 * l_n + 1;
      if (l_table.empty() && l_s0.empty() && !l_zero)
        throw std::invalid_argument("give --table, --s0, or --zero-classes");
      if (!l_table.empty())
        write_output(l_table, ups::lift_table_to_csv(ups::lift_table(O, p)));
      if (!l_s0.empty())
        write_output(l_s0, dump_json(complex_to_json_arg(ups::lift_s0_complex(O))));
      if (l_zero) {
        auto zs = ups::zero_alexander_classes(ups::lift_table(O, p));
        std::sort(zs.begin(), zs.end());
        std::string out;
        for (std::size_t i = 0; i < zs.size(); ++i) {
          if (i) out += ",";
          out += std::to_string(zs[i]);
        }
        std::cout << (zs.empty() ? std::string("none") : out) << "\n";
      }
      return kOk;
    }

    // --- obstruct slice ---
    if (cmd_os->parsed()) {
      if (os_map.empty() == (os_grid_p == 0))
        throw std::invalid_argument("give exactly one of --upsilon-map or --grid-p");
      if (os_grid_p != 0 && !os_group.empty())
        throw std::invalid_argument("--group only applies with --upsilon-map");
      ups::UpsilonMap U = os_map.empty() ? map_from_grid(os_grid_p)
                                         : map_from_file(os_map, os_group);
      if (cmd_os->count("--det") > 0 && ups::group_order(U.group) != os_det)
        throw std::invalid_argument(
            "--det " + std::to_string(os_det) + " disagrees with the group order " +
            std::to_string(ups::group_order(U.group)));
      auto res = ups::slice_obstruction(U, U.group, search_cap());
      if (res.obstructed) {
        std::cout << "obstructed: " << res.reason << "\n";
        return kObstructed;
      }
      std::cout << "passes: vanishing square-root subgroup of order "
                << res.metabolizer.size();
      if (res.metabolizer.size() <= 16) {
        std::cout << " {";
        for (std::size_t i = 0; i < res.metabolizer.size(); ++i) {
          if (i) std::cout << " ";
          std::cout << element_str(res.metabolizer[i]);
        }
        std::cout << "}";
      }
      std::cout << "\n";
      return kOk;
    }

    // --- obstruct order ---
    if (cmd_oo->parsed()) {
      if (oo_map.empty() == (oo_grid_p == 0))
        throw std::invalid_argument("give exactly one of --upsilon-map or --grid-p");
      ups::UpsilonMap U = oo_map.empty() ? map_from_grid(oo_grid_p)
                                         : map_from_file(oo_map, {});
      auto res = ups::finite_order_S(U, oo_p, ups::Rat::parse(oo_t));
      if (!res.warning.empty()) std::cout << "warning: " << res.warning << "\n";
      std::cout << "subgroup sums at t=" << oo_t << ":";
      for (const auto& s : res.subgroup_sums) std::cout << " " << s.str();
      std::cout << "\n";
      if (res.zero) {
        std::cout << "consistent with finite order\n";
        return kOk;
      }
      std::cout << "obstructed: every order-" << oo_p
                << " subgroup sum is nonzero of one sign (min |sum| = "
                << res.witness.str() << ")\n";
      return kObstructed;
    }

    // --- obstruct independence ---
    if (cmd_oi->parsed()) {
      auto report = ups::independence_driver(oi_primes, oi_bound, search_cap());
      std::size_t searched = 0;
      for (const auto& c : report.candidates)
        if (c.det_square) ++searched;
      std::cout << "candidate relations: " << report.candidates.size()
                << " (square determinant: " << searched << ")\n";
      if (report.family_independent) {
        std::cout << "family independent: every relation rejected\n";
        return kOk;
      }
      for (const auto& c : report.candidates) {
        if (!c.det_square || c.every_metabolizer_witnessed) continue;
        std::cout << "unrejected relation: coefficients";
        for (int x : c.coeffs) std::cout << " " << x;
        std::cout << "\n";
        break;
      }
      return kObstructed;
    }

    // --- compare ---
    if (cmd_compare->parsed()) {
      ups::KnotComplex A = load_complex_file(c_a);
      ups::KnotComplex B = load_complex_file(c_b);
      bool all = true;
      ups::Rat da = ups::correction_term(A), db = ups::correction_term(B);
      bool eq = da == db;
      all = all && eq;
      std::cout << "d: " << da.str() << " vs " << db.str()
                << (eq ? " — equal" : " — different") << "\n";
      ups::Rat ta = ups::tau(A), tb = ups::tau(B);
      eq = ta == tb;
      all = all && eq;
      std::cout << "tau: " << ta.str() << " vs " << tb.str()
                << (eq ? " — equal" : " — different") << "\n";
      eq = ups::piecewise_equal(ups::upsilon_function(A), ups::upsilon_function(B));
      all = all && eq;
      std::cout << "upsilon: " << (eq ? "equal" : "different") << "\n";
      if (c_iso) {
        auto iso = ups::detail::knot_graded_iso(A, B);
        if (iso) {
          auto min_of = [](const ups::KnotComplex& K) {
            ups::Rat a = K.generators.at(0).A, m = K.generators.at(0).M;
            for (const auto& g : K.generators) {
              a = ups::min(a, g.A);
              m = ups::min(m, g.M);
            }
            return std::pair(a, m);
          };
          auto [aA, mA] = min_of(A);
          auto [aB, mB] = min_of(B);
          std::cout << "graded-iso: yes (A-shift " << (aB - aA).str()
                    << ", M-shift " << (mB - mA).str() << ")\n";
        } else {
          std::cout << "graded-iso: no\n";
          all = false;
        }
      }
      return all ? kOk : kObstructed;
    }

    throw std::invalid_argument("no subcommand selected");
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ups::CapExceeded& e) {
    std::cerr << "error: " << e.what() << " (raise UPSILON_CAP to search further)\n";
    return kUsage;
  } catch (const ups::NotKnotType& e) {
    if (g_user_complex) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return kInvariant;
  }
}
