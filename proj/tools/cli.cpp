#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "slrank/concentration.hpp"
#include "slrank/embed.hpp"
#include "slrank/errors.hpp"
#include "slrank/field.hpp"
#include "slrank/folner.hpp"
#include "slrank/groups.hpp"
#include "slrank/pdf.hpp"

namespace slrank::cli {

namespace {

using nlohmann::json;

struct Params {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> cap;

  std::uint64_t q = 2;
  std::size_t n = 2;
  unsigned m = 1;
  unsigned depth = 1;
  std::uint64_t trials = 1000;
  std::uint64_t samples = 1000;
  std::uint64_t functions = 100;
  std::uint64_t pairs = 10000;
  std::uint64_t cert_pairs = 10000;
  std::uint64_t good_samples = 10000;
  std::uint64_t max_draws = 1000;
  std::string eps = "0.5";
  std::size_t k = 3;
  std::string function = "id";
  std::string radii;
  std::string group = "z:1";
  std::string levels = "1-10";
  std::string elements;
  std::string ring;
  bool nesting = false;
};

// Rows of one artifact plus the trailing metadata; `document` replaces the
// generic JSON layout when set.
struct Artifact {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json document;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> failures;

  void fail(std::string witness) { failures.push_back(std::move(witness)); }
};

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_null()) return s;
  s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  return quoted + "\"";
}

std::string render(const Artifact& a, const std::string& format) {
  if (format == "json") {
    json doc = a.document;
    if (doc.is_null()) {
      doc = json::object();
      doc["rows"] = json::array();
      for (const auto& row : a.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < a.columns.size(); ++i) r[a.columns[i]] = row[i];
        doc["rows"].push_back(std::move(r));
      }
    }
    json meta = json::object();
    for (const auto& [k, v] : a.meta) meta[k] = v;
    doc["meta"] = std::move(meta);
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < a.columns.size(); ++i) os << (i ? "," : "") << a.columns[i];
  os << "\n";
  for (const auto& row : a.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
  os << "#";
  for (std::size_t i = 0; i < a.meta.size(); ++i) os << (i ? ", " : " ") << a.meta[i].first << "=" << a.meta[i].second;
  os << "\n";
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw usage_error("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw usage_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::uint64_t resolve_cap(const Params& p, std::uint64_t fallback) {
  if (p.cap) return *p.cap;
  if (const char* env = std::getenv(kCapEnv)) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw usage_error(std::string(kCapEnv) + " must be a non-negative integer");
  }
  return fallback;
}

constexpr std::uint64_t kDefaultDimensionCap = 4096;

void check_dimension(const Params& p, std::uint64_t dim) {
  const std::uint64_t cap = resolve_cap(p, kDefaultDimensionCap);
  if (dim > cap) throw resource_error("matrix size " + std::to_string(dim) + " exceeds the cap " + std::to_string(cap));
}

std::string fmt_rational(const Rational& r) { return to_string(r); }

std::string fmt_double(double v) { return json(v).dump(); }

// Entries as element codes, rows separated by ';'.
std::string compact(const MatF& m) {
  std::string s;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) s += ';';
    for (std::size_t c = 0; c < m.cols(); ++c) s += (c ? " " : "") + std::to_string(m(r, c).v);
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep))
    if (!part.empty()) parts.push_back(part);
  return parts;
}

// "1-4,7" -> 1 2 3 4 7
std::vector<unsigned> parse_levels(const std::string& text) {
  std::vector<unsigned> out;
  for (const auto& part : split(text, ',')) {
    try {
      const auto dash = part.find('-');
      std::size_t used = 0;
      if (dash == std::string::npos) {
        out.push_back(static_cast<unsigned>(std::stoul(part, &used)));
        if (used != part.size()) throw usage_error("");
        continue;
      }
      const auto lo = std::stoul(part.substr(0, dash));
      const auto hi = std::stoul(part.substr(dash + 1));
      if (lo > hi || hi > 64) throw usage_error("");
      for (auto l = lo; l <= hi; ++l) out.push_back(static_cast<unsigned>(l));
    } catch (const std::exception&) {
      throw usage_error("bad level list '" + text + "'");
    }
  }
  if (out.empty()) throw usage_error("no levels given");
  return out;
}

void add_meta(Artifact& a, const Params& p, const std::string& method) {
  a.meta.insert(a.meta.begin(), {{"seed", std::to_string(p.seed)}, {"version", SLRANK_VERSION}, {"method", method}});
}

struct GroupSetup {
  GroupTable g;
  ConjClasses cc;
};

GroupSetup group_setup(const Params& p) {
  GroupTable g = GroupTable::enumerate(p.n, Field::make(p.q), resolve_cap(p, kDefaultGroupCap));
  ConjClasses cc = conjugacy_classes(g);
  return {std::move(g), std::move(cc)};
}

CharTable table_for(const GroupSetup& s, const Params& p) {
  Rng rng = make_stream(p.seed, 1);
  return character_table(s.g, s.cc, StructureConstants(s.g, s.cc), rng);
}

Artifact field_check(const Params& p) {
  Artifact a;
  a.columns = {"level", "order", "modulus", "alpha", "beta", "method", "axiom_checks", "axiom_failures",
               "conjugation_checks", "conjugation_failures"};
  const Tower tower = build_tower(PrimePower::from_order(p.q), p.depth);
  Rng rng = make_stream(p.seed);
  std::string methods;
  for (std::size_t level = 0; level < tower.fields.size(); ++level) {
    const Field& f = *tower.fields[level];
    const AxiomReport ax = check_field_axioms(f, rng, p.trials);
    std::string modulus;
    for (auto c : f.modulus()) modulus += (modulus.empty() ? "" : " ") + std::to_string(c);
    json alpha, beta, method, cchecks, cfail;
    if (level > 0) {
      const QuadExt& step = tower.steps[level - 1];
      const AxiomReport conj = check_conjugation(step, rng, p.trials);
      alpha = step.base->format(step.alpha);
      beta = step.base->format(step.beta);
      method = step.method;
      methods += (methods.empty() ? "" : "+") + step.method;
      cchecks = conj.checks;
      cfail = conj.failures;
      if (conj.failures) a.fail("conjugation fails at level " + std::to_string(level));
    }
    if (ax.failures) a.fail("field axioms fail at level " + std::to_string(level));
    a.rows.push_back({level, f.order(), modulus, alpha, beta, method, ax.checks, ax.failures, cchecks, cfail});
  }
  add_meta(a, p, methods.empty() ? "prime-field" : methods);
  return a;
}

Artifact embed_verify(const Params& p) {
  check_dimension(p, (std::uint64_t{1} << p.n) << p.m);
  Rng rng = make_stream(p.seed);
  const EmbedReport rep = verify_embedding(PrimePower::from_order(p.q), static_cast<unsigned>(p.n), p.m, p.trials, rng);
  Artifact a;
  a.columns = {"q", "n", "m", "trials", "failures", "max_rank_discrepancy"};
  a.rows.push_back({p.q, p.n, p.m, rep.trials, rep.failures, rep.max_rank_discrepancy});
  a.document = to_json(rep);
  if (rep.failures) a.fail(std::to_string(rep.failures) + " of " + std::to_string(rep.trials) + " trials failed");
  add_meta(a, p, "quad-embed-chain");
  return a;
}

Artifact diameter(const Params& p) {
  check_dimension(p, p.n);
  Rng rng = make_stream(p.seed);
  const ChainProfile prof = chain_profile(p.n, Field::make(p.q), p.samples, rng);
  Artifact a;
  a.columns = {"n", "q", "level", "certified", "max_witness_rank", "samples", "failures"};
  for (const auto& l : prof.levels)
    a.rows.push_back({p.n, p.q, l.level, fmt_rational(l.certified), l.max_witness_rank, l.samples, l.failures});
  if (prof.failures()) a.fail(std::to_string(prof.failures()) + " witnesses violate the reduction postconditions");
  if (prof.length > prof.length_bound) a.fail("chain length exceeds 2 n^-1/2");
  add_meta(a, p, "stabilizer-chain");
  a.meta.emplace_back("length", fmt_double(prof.length));
  a.meta.emplace_back("length_bound", fmt_double(prof.length_bound));
  return a;
}

Artifact chartab(const Params& p) {
  const GroupSetup s = group_setup(p);
  const CharTable t = table_for(s, p);
  Artifact a;
  a.columns = {"character", "degree", "class", "class_size", "re", "im"};
  const auto round12 = [](double v) {
    const double r = std::round(v * 1e12) / 1e12;
    return r == 0 ? 0.0 : r;
  };
  for (std::size_t chi = 0; chi < t.count(); ++chi)
    for (std::size_t c = 0; c < s.cc.count(); ++c) {
      const auto v = t.values(static_cast<Eigen::Index>(chi), static_cast<Eigen::Index>(c));
      a.rows.push_back({chi, t.degrees[chi], c, s.cc.sizes[c], round12(v.real()), round12(v.imag())});
    }
  a.document = to_json(t, s.g, s.cc);
  if (t.orthogonality_residual >= 1e-8)
    a.fail("orthogonality residual " + fmt_double(t.orthogonality_residual) + " >= 1e-8");
  add_meta(a, p, "class-algebra-eigenvectors");
  a.meta.emplace_back("orthogonality_residual", fmt_double(t.orthogonality_residual));
  a.meta.emplace_back("attempts", std::to_string(t.attempts));
  return a;
}

const std::vector<std::string> kClassColumns = {"q", "n", "class", "class_rep", "central", "delta", "metric", "value"};

std::vector<json> class_row(const Params& p, const GroupSetup& s, std::size_t c, const std::string& metric, json value) {
  const MatF rep = s.g.element(s.cc.reps[c]);
  return {p.q, p.n, c, compact(rep), s.cc.central(c), fmt_rational(central_distance(rep).delta), metric, std::move(value)};
}

Artifact gluck(const Params& p) {
  const GroupSetup s = group_setup(p);
  const CharTable t = table_for(s, p);
  const GluckResult res = gluck_check(s.g, s.cc, t);
  const auto maxima = class_character_maxima(s.cc, t);
  Artifact a;
  a.columns = kClassColumns;
  for (std::size_t c = 0; c < s.cc.count(); ++c) a.rows.push_back(class_row(p, s, c, "max_normalized_character", maxima[c]));
  if (!res.holds())
    a.fail("class " + std::to_string(res.cls) + ", character " + std::to_string(res.character) + ": ratio " +
           fmt_double(res.max_ratio) + " >= " + fmt_double(res.bound));
  add_meta(a, p, "class-algebra-eigenvectors");
  a.meta.emplace_back("bound", fmt_double(res.bound));
  a.meta.emplace_back("max_ratio", fmt_double(res.max_ratio));
  return a;
}

Artifact covering(const Params& p) {
  const GroupSetup s = group_setup(p);
  const StructureConstants sc(s.g, s.cc);
  Artifact a;
  a.columns = kClassColumns;
  for (std::size_t c = 0; c < s.cc.count(); ++c) {
    const auto m = covering_number(s.cc, sc, c);
    a.rows.push_back(class_row(p, s, c, "covering_number", m ? json(*m) : json("none")));
    if (s.cc.central(c) == m.has_value())
      a.fail("class " + std::to_string(c) + (m ? " is central but covers" : " is non-central but never covers"));
  }
  add_meta(a, p, "class-support-closure");
  return a;
}

Artifact pdf_lemma(const Params& p) {
  const GroupSetup s = group_setup(p);
  const CharTable t = table_for(s, p);
  Rng family_rng = make_stream(p.seed, 2);
  Rng pair_rng = make_stream(p.seed, 3);
  const auto family = pdf_family(s.g, s.cc, t, p.functions, family_rng);
  Artifact a;
  a.columns = {"function", "kind", "class", "premise", "eps", "applicable", "bound", "max_deviation", "conclusion",
               "lambda", "lambda_step", "character_step", "markov_step", "density", "density_step",
               "factorization_step", "star_violation"};
  std::uint64_t applicable = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& [kind, psi] = family[i];
    const auto [elem, premise] = best_premise(s.g, s.cc, psi);
    const double eps = premise + 1e-9;
    const LemmaReport r = pdf_lemma_check(s.g, s.cc, t, psi, elem, eps);
    const double star = star_violation(s.g, psi, pair_rng, p.pairs);
    std::vector<json> row{i, kind, s.cc.class_of[elem], premise, eps, r.applicable, r.bound, r.max_deviation,
                          r.conclusion, r.lambda, r.lambda_step, r.character_step, r.markov_step, r.density,
                          r.density_step, r.factorization_step, star};
    // The lemma says nothing when the premise fails.
    if (!r.applicable) std::fill(row.begin() + 7, row.end() - 1, json());
    a.rows.push_back(std::move(row));
    applicable += r.applicable;
    if (r.applicable && !(r.conclusion && r.all_steps())) a.fail("function " + std::to_string(i) + " breaks the lemma");
    if (star > 1e-10) a.fail("function " + std::to_string(i) + " violates the pair inequality by " + fmt_double(star));
  }
  add_meta(a, p, "best-premise");
  a.meta.emplace_back("applicable", std::to_string(applicable));
  a.meta.emplace_back("vacuous", 16.0 / static_cast<double>(p.q) >= 1 ? "true" : "false");
  return a;
}

const std::vector<std::string> kTailColumns = {"n", "q", "r_or_eps", "bound", "empirical", "stderr", "samples", "seed"};

Artifact levy(const Params& p) {
  check_dimension(p, p.n);
  std::vector<Rational> radii;
  if (p.radii.empty())
    for (std::int64_t j = 1; j <= 32; ++j) radii.emplace_back(j, 32);
  else
    for (const auto& r : split(p.radii, ',')) radii.push_back(parse_rational(r));
  const auto rep =
      lipschitz_concentration(p.n, Field::make(p.q), LipschitzSpec::parse(p.function), radii, p.samples, p.seed, p.cert_pairs);
  Artifact a;
  a.columns = kTailColumns;
  a.columns.insert(a.columns.end(), {"asserted", "ok"});
  for (const auto& row : rep.rows) {
    a.rows.push_back({p.n, p.q, fmt_rational(row.r), row.bound, row.empirical, row.stderr_, rep.samples, p.seed,
                      row.asserted, row.ok});
    if (!row.ok) a.fail("tail at r = " + fmt_rational(row.r) + " is " + fmt_double(row.empirical));
  }
  add_meta(a, p, "monte-carlo");
  a.meta.emplace_back("function", rep.function);
  a.meta.emplace_back("median", fmt_rational(rep.median));
  a.meta.emplace_back("certificate_failures", std::to_string(rep.certificate_failures));
  return a;
}

Artifact ramsey(const Params& p) {
  check_dimension(p, p.n);
  const Rational eps = parse_rational(p.eps);
  const FunctionalCover cover = even_cover(p.n, eps, p.m);
  const auto rep = ramsey_search(p.n, Field::make(p.q), cover, p.k, p.trials, p.good_samples, p.seed, p.max_draws);
  Artifact a;
  a.columns = kTailColumns;
  a.columns.insert(a.columns.end(), {"k", "m", "threshold", "trials", "successes", "mean_samples"});
  a.rows.push_back({p.n, p.q, fmt_rational(eps), rep.bound, rep.frequency, rep.stderr_, rep.good_samples, p.seed, p.k,
                    p.m, rep.threshold, rep.trials, rep.successes, rep.mean_samples});
  const bool above = static_cast<double>(p.n) > rep.threshold;
  if (above && rep.successes < rep.trials)
    a.fail(std::to_string(rep.trials - rep.successes) + " trials found no monochromatic translate");
  if (!rep.frequency_ok()) a.fail("good-set frequency " + fmt_double(rep.frequency) + " is below the bound");
  std::string intervals;
  for (const auto& [lo, hi] : cover.intervals)
    intervals += (intervals.empty() ? "" : " ") + ("[" + fmt_rational(lo) + ";" + fmt_rational(hi) + "]");
  add_meta(a, p, "translate-search");
  a.meta.emplace_back("cover", intervals);
  a.meta.emplace_back("regime", above ? "above-threshold" : "below-threshold");
  return a;
}

Artifact folner(const Params& p) {
  const FolnerSpec spec(AmenableGroup::parse(p.group), resolve_cap(p, kDefaultFolnerCap));
  const AmenableGroup& grp = spec.group();
  const FieldPtr field = Field::make(p.q);
  const auto levels = parse_levels(p.levels);
  std::vector<GroupCode> elems;
  for (const auto& e : split(p.elements, ';')) elems.push_back(grp.parse_element(e));
  if (elems.empty() && p.ring.empty()) throw usage_error("folner needs --elements or --ring");
  if (p.nesting && !spec.tiles()) throw usage_error("--nesting needs a free abelian group");

  Artifact a;
  a.columns = {"quantity", "subject", "level", "size", "domain", "rank", "value", "bound", "ok"};
  auto rat = [](std::uint64_t num, std::uint64_t den) {
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
  };

  for (const auto& h : elems)
    for (unsigned n : levels) {
      const auto size = spec.size(n);
      const auto dom = folner_domain(h, spec, n);
      const auto rk = rank(folner_rep(h, spec, n, field));
      const Rational lower = Rational(1) - Rational(grp.folner_constant(h), std::int64_t{1} << n);
      const bool ok = rk == dom && rat(dom, size) >= lower;
      a.rows.push_back({"folner_rep", grp.format(h), n, size, dom, rk, fmt_rational(rat(rk, size)), fmt_rational(lower), ok});
      if (!ok) a.fail("folner_rep " + grp.format(h) + " at level " + std::to_string(n));
    }

  if (elems.size() == 2) {
    const auto& [g, h] = std::pair{elems[0], elems[1]};
    const auto prof = discreteness_profile(g, h, spec, levels, field);
    const std::string subject = grp.format(g) + " " + grp.format(h);
    for (std::size_t i = 0; i < prof.size(); ++i) {
      json bound;
      bool ok = prof[i].distance <= Rational(1) && (g != h || prof[i].rank == 0);
      if (i > 0 && prof[i].level == prof[i - 1].level + 1) {
        const unsigned n = prof[i - 1].level;
        const auto size = spec.size(n);
        const Rational slack = rat(size - folner_domain(g, spec, n), size) + rat(size - folner_domain(h, spec, n), size);
        const Rational floor = prof[i - 1].distance - slack;
        bound = fmt_rational(floor);
        ok = ok && prof[i].distance >= floor;
      }
      a.rows.push_back({"distance", subject, prof[i].level, prof[i].size, json(), prof[i].rank,
                        fmt_rational(prof[i].distance), bound, ok});
      if (!ok) a.fail("distance profile of " + subject + " at level " + std::to_string(prof[i].level));
    }
  }

  if (!p.ring.empty()) {
    const auto ring = GroupRingElement::parse(p.ring, grp, *field);
    for (unsigned n : levels) {
      const auto nr = normalized_rank(ring, spec, n, field);
      // Both groups are torsion-free and orderable, so every non-zero element is a non-zero-divisor.
      const bool ok = ring.coeffs.empty() ? nr.rank == 0 : nr.independent();
      a.rows.push_back({"ring_rank", p.ring, n, nr.size, nr.domain, nr.rank, fmt_rational(nr.value),
                        fmt_rational(rat(nr.domain, nr.size)), ok});
      if (!ok) a.fail("columns over L_n^a are dependent at level " + std::to_string(n));
    }
  }

  if (p.nesting)
    for (const auto& h : elems)
      for (unsigned n : levels) {
        const auto rep = nesting_check(spec, h, n, field);
        a.rows.push_back({"nesting", grp.format(h), n, spec.size(n + 1), json(), json(), fmt_rational(rep.distance),
                          fmt_rational(rep.boundary), rep.ok()});
        if (!rep.ok()) a.fail("nesting of " + grp.format(h) + " at level " + std::to_string(n));
      }

  add_meta(a, p, "sparse-elimination");
  a.meta.emplace_back("group", grp.name());
  a.meta.emplace_back("q", std::to_string(p.q));
  return a;
}

Artifact center(const Params& p) {
  const GroupTable g = GroupTable::enumerate(p.n, Field::make(p.q), resolve_cap(p, kDefaultGroupCap));
  const CenterReport rep = group_center(g);
  Artifact a;
  a.columns = {"q", "n", "center_size", "scalar_count", "matches", "center"};
  std::string elems;
  for (auto x : rep.center) elems += (elems.empty() ? "" : "|") + compact(g.element(x));
  a.rows.push_back({p.q, p.n, rep.center.size(), rep.scalars.size(), rep.matches(), elems});
  if (!rep.matches()) a.fail("center differs from the scalar matrices with z^n = 1");
  add_meta(a, p, "generator-centralizer");
  return a;
}

struct Command {
  std::string name;
  std::string help;
  std::string default_format;
  std::function<Artifact(const Params&)> handler;
  std::function<void(CLI::App&, Params&)> options;
};

void group_options(CLI::App& s, Params& p) {
  s.add_option("--q", p.q, "field order");
  s.add_option("--n", p.n, "matrix size");
}

std::vector<Command> commands() {
  return {
      {"field-check", "field axioms and the quadratic tower", "csv", field_check,
       [](CLI::App& s, Params& p) {
         s.add_option("--q", p.q, "base field order");
         s.add_option("--depth", p.depth, "tower depth");
         s.add_option("--trials", p.trials, "random triples per field")->default_val(10000);
       }},
      {"embed-verify", "products, determinant and ranks under the tower embedding", "json", embed_verify,
       [](CLI::App& s, Params& p) {
         s.add_option("--q", p.q, "base field order");
         s.add_option("--n", p.n, "level: matrices of size 2^n")->default_val(1);
         s.add_option("--m", p.m, "tower depth");
         s.add_option("--trials", p.trials, "random pairs");
       }},
      {"diameter", "stabilizer-chain witnesses and the length bound", "csv", diameter,
       [](CLI::App& s, Params& p) {
         group_options(s, p);
         s.add_option("--samples", p.samples, "samples per chain level");
       }},
      {"chartab", "character table of SL_n(q)", "json", chartab, group_options},
      {"gluck", "normalized character maxima per class", "csv", gluck, group_options},
      {"covering", "conjugacy covering numbers per class", "csv", covering, group_options},
      {"pdf-lemma", "positive definite function lemma on SL_n(q)", "csv", pdf_lemma,
       [](CLI::App& s, Params& p) {
         group_options(s, p);
         s.add_option("--functions", p.functions, "number of functions");
         s.add_option("--pairs", p.pairs, "random pairs for the pair inequality");
       }},
      {"levy", "Lipschitz tails against 2 exp(-r^2 n / 64)", "csv", levy,
       [](CLI::App& s, Params& p) {
         s.add_option("--q", p.q, "field order");
         s.add_option("--n", p.n, "matrix size")->default_val(128);
         s.add_option("--samples", p.samples, "Monte Carlo samples")->default_val(100000);
         s.add_option("--function", p.function, "id | anchor | set:K | const:V");
         s.add_option("--radii", p.radii, "comma separated radii (default j/32)");
         s.add_option("--cert-pairs", p.cert_pairs, "pairs for the Lipschitz certificate");
       }},
      {"ramsey", "monochromatic translates for a finite cover", "csv", ramsey,
       [](CLI::App& s, Params& p) {
         s.add_option("--q", p.q, "field order");
         s.add_option("--n", p.n, "matrix size")->default_val(512);
         s.add_option("--eps", p.eps, "Lebesgue number");
         s.add_option("--k", p.k, "size of F");
         s.add_option("--m", p.m, "number of cover intervals")->default_val(2);
         s.add_option("--trials", p.trials, "independent searches")->default_val(100);
         s.add_option("--good-samples", p.good_samples, "samples for the good-set frequency");
         s.add_option("--max-draws", p.max_draws, "draws per search");
       }},
      {"folner", "partial-permutation representations on Følner boxes", "csv", folner,
       [](CLI::App& s, Params& p) {
         s.add_option("--group", p.group, "z:D | heisenberg");
         s.add_option("--q", p.q, "field order");
         s.add_option("--levels", p.levels, "levels, e.g. 1-10 or 2,4");
         s.add_option("--elements", p.elements, "';' separated tuples; two give a distance profile");
         s.add_option("--ring", p.ring, "group ring element, e.g. (0)+2*(1)");
         s.add_flag("--nesting", p.nesting, "cross-level nesting check (Z^d)");
       }},
      {"center", "center of SL_n(q) against the scalar matrices", "csv", center, group_options},
  };
}

// key=value lines become --key=value right after the subcommand name, so
// explicit flags given later take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 == args.size()) throw usage_error("--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;
  const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.empty() || a[0] != '-'; });
  if (sub == args.end()) return args;
  std::vector<std::string> injected;
  for (const auto& item : CLI::ConfigBase().from_file(*path)) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && item.parents.front() != *sub) continue;
    std::string value;
    for (const auto& v : item.inputs) value += (value.empty() ? "" : ",") + v;
    injected.push_back("--" + item.name + "=" + value);
  }
  args.insert(sub + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-level experiments on SL_n(q) with the normalized rank metric", "slrank"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", SLRANK_VERSION);
  std::string config_path;
  app.add_option("--config", config_path, "key=value defaults for the subcommand; [name] sections apply to one subcommand");

  const auto roster = commands();
  // One parameter set per subcommand: default_val writes through immediately.
  std::vector<Params> params(roster.size());
  std::map<const CLI::App*, std::size_t> by_app;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const Command& cmd = roster[i];
    Params& p = params[i];
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--seed", p.seed, "master seed");
    sub->add_option("--out", p.out, "output file (default stdout)");
    sub->add_option("--format", p.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--cap", p.cap, std::string("size cap (default from ") + kCapEnv + ")");
    cmd.options(*sub, p);
    by_app[sub] = i;
  }

  try {
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << SLRANK_VERSION << "\n";
    return kOk;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  const std::size_t chosen = by_app.at(app.get_subcommands().front());
  const Command& cmd = roster[chosen];
  const Params& chosen_params = params[chosen];
  try {
    const Artifact artifact = cmd.handler(chosen_params);
    const std::string text = render(artifact, chosen_params.format.empty() ? cmd.default_format : chosen_params.format);
    if (chosen_params.out.empty()) out << text;
    else write_atomic(chosen_params.out, text);
    for (const auto& w : artifact.failures) err << cmd.name << ": " << w << "\n";
    return artifact.failures.empty() ? kOk : kAssertionFailed;
  } catch (const resource_error& e) {
    err << cmd.name << ": " << e.what() << "\n";
    return kResourceCap;
  } catch (const numeric_error& e) {
    err << cmd.name << ": " << e.what() << "\n";
    return kAssertionFailed;
  } catch (const std::logic_error& e) {
    // usage_error and the domain errors of the field layer.
    err << cmd.name << ": " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << cmd.name << ": " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << cmd.name << ": " << e.what() << "\n";
    return kAssertionFailed;
  }
}

}  // namespace slrank::cli
