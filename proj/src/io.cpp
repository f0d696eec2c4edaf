#include "penta/io.hpp"

#include <fstream>
#include <sstream>

namespace penta::io {

namespace {

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "/" + key, "missing field");
  return *it;
}

int int_field(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ParseError(where + "/" + key, "expected an integer");
  return v.get<int>();
}

std::string str_field(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) throw ParseError(where + "/" + key, "expected a string");
  return v.get<std::string>();
}

Rational rational_at(const Json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where, "coefficient must be a string like \"-3/4\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(where, e.what());
  }
}

AlphabetPtr alphabet_from(const Json& j, const std::string& where) {
  const std::string kind = str_field(j, "kind", where);
  if (kind == kind_name(AlphabetKind::F2)) return alphabet_f2();
  if (kind == kind_name(AlphabetKind::FN1)) {
    const int N = int_field(j, "N", where);
    if (N < 1) throw ParseError(where + "/N", "level must be >= 1");
    return alphabet_fn1(N);
  }
  throw ParseError(where + "/kind", "unsupported alphabet '" + kind + "'");
}

Json terms_to_json(const Series& s) {
  Json terms = Json::array();
  for (const auto& [w, c] : s.terms()) {
    Json word = Json::array();
    for (Letter l : w) word.push_back(s.alphabet().letter(l));
    terms.push_back({{"word", word}, {"coeff", c.get_str()}});
  }
  return terms;
}

void terms_from_json(const Json& terms, const std::string& where, Series& out,
                     const std::function<Letter(const std::string&, const std::string&)>& letter) {
  if (!terms.is_array()) throw ParseError(where, "expected an array of terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string at = where + "/" + std::to_string(i);
    const Json& word = field(terms[i], "word", at);
    if (!word.is_array()) throw ParseError(at + "/word", "expected an array of letters");
    Word w;
    for (std::size_t k = 0; k < word.size(); ++k) {
      const std::string lat = at + "/word/" + std::to_string(k);
      if (!word[k].is_string()) throw ParseError(lat, "letter must be a string");
      w.push_back(letter(word[k].get<std::string>(), lat));
    }
    if (out.alphabet().word_degree(w) > out.maxdeg())
      throw ParseError(at + "/word", "word above the truncation degree");
    out.add(w, rational_at(field(terms[i], "coeff", at), at + "/coeff"));
  }
}

}  // namespace

Json series_to_json(const Series& s) {
  const Alphabet& a = s.alphabet();
  if (a.kind() != AlphabetKind::F2 && a.kind() != AlphabetKind::FN1)
    throw std::invalid_argument("series_to_json: only F_2 and F_{N+1} series are serialized");
  Json alpha = {{"kind", kind_name(a.kind())}};
  if (a.kind() == AlphabetKind::FN1) alpha["N"] = a.level();
  return {{"alphabet", alpha}, {"maxdeg", s.maxdeg()}, {"terms", terms_to_json(s)}};
}

Series series_from_json(const Json& j, const std::string& where) {
  AlphabetPtr a = alphabet_from(field(j, "alphabet", where), where + "/alphabet");
  const int D = int_field(j, "maxdeg", where);
  if (D < 0) throw ParseError(where + "/maxdeg", "negative truncation degree");
  Series s(a, D);
  terms_from_json(field(j, "terms", where), where + "/terms", s,
                  [&](const std::string& sym, const std::string& at) {
                    auto l = a->find(sym);
                    if (!l) throw ParseError(at, "unknown letter '" + sym + "'");
                    return *l;
                  });
  return s;
}

Json pair_to_json(const AssociatorPair& p) {
  Json eqs = Json::array();
  for (Eq e : p.imposed) eqs.push_back(eq_name(e));
  return {{"schema", kSchema}, {"kind", "associator_pair"},
          {"N", p.N},          {"a", p.a},
          {"mu", p.mu.get_str()}, {"D", p.D},
          {"imposed", eqs},    {"provenance", p.provenance},
          {"g", series_to_json(p.g)}, {"h", series_to_json(p.h)}};
}

AssociatorPair pair_from_json(const Json& j) {
  if (str_field(j, "schema", "") != kSchema) throw ParseError("/schema", "expected penta/1");
  if (str_field(j, "kind", "") != "associator_pair")
    throw ParseError("/kind", "expected associator_pair");
  AssociatorPair p;
  p.N = int_field(j, "N", "");
  p.a = int_field(j, "a", "");
  p.mu = rational_at(field(j, "mu", ""), "/mu");
  p.D = int_field(j, "D", "");
  const Json& eqs = field(j, "imposed", "");
  if (!eqs.is_array()) throw ParseError("/imposed", "expected an array");
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    try {
      p.imposed.insert(parse_eq(eqs[i].get<std::string>()));
    } catch (const std::exception& e) {
      throw ParseError("/imposed/" + std::to_string(i), e.what());
    }
  }
  p.provenance = str_field(j, "provenance", "");
  p.g = series_from_json(field(j, "g", ""), "/g");
  p.h = series_from_json(field(j, "h", ""), "/h");
  if (p.g.alphabet().kind() != AlphabetKind::F2) throw ParseError("/g/alphabet", "g must be on F2");
  if (p.h.alphabet().kind() != AlphabetKind::FN1 || p.h.alphabet().level() != p.N)
    throw ParseError("/h/alphabet", "h must be on F_{N+1} with the pair's N");
  return p;
}

Json bar_to_json(const BarTensor& b) {
  Json terms = Json::array();
  for (const auto& [w, c] : b.series().terms()) {
    Json word = Json::array();
    for (Letter l : w) word.push_back(OneForm{b.space(), b.N(), l}.symbol());
    terms.push_back({{"word", word}, {"coeff", c.get_str()}});
  }
  return {{"space", space_name(b.space())}, {"N", b.N()}, {"terms", terms}};
}

BarTensor bar_from_json(const Json& j, const std::string& where) {
  Space sp;
  try {
    sp = parse_space(str_field(j, "space", where));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(where + "/space", e.what());
  }
  const int N = int_field(j, "N", where);
  if (N < 1) throw ParseError(where + "/N", "level must be >= 1");
  const Json& terms = field(j, "terms", where);
  int W = 0;
  if (terms.is_array())
    for (const auto& t : terms)
      if (t.is_object() && t.contains("word") && t["word"].is_array())
        W = std::max(W, static_cast<int>(t["word"].size()));
  Series s(form_alphabet(sp, N), W);
  terms_from_json(terms, where + "/terms", s, [&](const std::string& sym, const std::string& at) {
    try {
      return OneForm::parse(sp, N, sym).letter;
    } catch (const std::exception& e) {
      throw ParseError(at, e.what());
    }
  });
  return BarTensor(sp, N, std::move(s));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
}

Json read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

void write_file(const std::filesystem::path& p, const Json& j) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << dump(j);
}

bool roundtrip(const std::filesystem::path& p) {
  const Json j = read_file(p);
  const std::string kind = j.is_object() && j.contains("kind") && j["kind"].is_string()
                               ? j["kind"].get<std::string>()
                               : std::string("series");
  if (kind == "associator_pair") {
    AssociatorPair a = pair_from_json(j);
    const std::string t1 = dump(pair_to_json(a));
    AssociatorPair b = pair_from_json(parse_text(t1));
    return t1 == dump(pair_to_json(b)) && a.g == b.g && a.h == b.h && a.N == b.N && a.a == b.a &&
           a.mu == b.mu && a.D == b.D && a.imposed == b.imposed && a.provenance == b.provenance;
  }
  if (kind == "bar_tensor" || (j.is_object() && j.contains("space"))) {
    BarTensor a = bar_from_json(j);
    const std::string t1 = dump(bar_to_json(a));
    BarTensor b = bar_from_json(parse_text(t1));
    return t1 == dump(bar_to_json(b)) && a == b;
  }
  Series a = series_from_json(j);
  const std::string t1 = dump(series_to_json(a));
  Series b = series_from_json(parse_text(t1));
  return t1 == dump(series_to_json(b)) && a == b;
}

}  // namespace penta::io
