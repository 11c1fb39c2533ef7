#ifndef BERKRES_TOOLS_MAPFILE_HPP
#define BERKRES_TOOLS_MAPFILE_HPP

/**
 * @file mapfile.hpp
 *
 * Map files for the command-line tool: a JSON document that selects the
 * coefficient field and lists the two rows of homogeneous coefficients.
 *
 *   {
 *     "field": { "kind": "laurent" | "padic",
 *                "residue": "Q" | "Fp",
 *                "p": <prime >= 5, when the residue field is F_p>,
 *                "ramification": <positive integer; laurent only> },
 *     "degree": d,
 *     "numerator":  [ d+1 coefficient strings, the X^d coefficient first ],
 *     "denominator": [ d+1 coefficient strings ]
 *   }
 *
 * Coefficients use the shared scalar grammar ("t^2 + 3/4*t^(1/2)"); in the
 * p-adic backend the letter t stands for the prime itself and exponents
 * must be integers.  The loaded pair is carried in a variant over the three
 * coefficient backends, and the raw document bytes are hashed (FNV-1a,
 * 64-bit) so reports can identify their input exactly.
 */

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "berkres/forms.hpp"
#include "berkres/padic.hpp"
#include "berkres/puiseux.hpp"
#include "berkres/rational.hpp"
#include "berkres/residue.hpp"

namespace berkres {
namespace tool {

/** FNV-1a, 64-bit, over raw bytes. */
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

/** Fixed-width lowercase hex rendering of a 64-bit hash. */
inline std::string hash_hex(std::uint64_t h) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

/** The coefficient-field selector of a map file. */
struct FieldDesc {
  std::string kind;      // "laurent" or "padic"
  std::string residue;   // "Q" or "Fp"
  std::uint64_t p = 0;   // prime when the residue field is F_p
  long ramification = 1; // exponent denominator of the value group (laurent only)
};

using LaurentQPair = HomogeneousPair<Puiseux<Rat>>;
using LaurentFpPair = HomogeneousPair<Puiseux<Fp>>;
using PadicPair = HomogeneousPair<Padic>;
using AnyPair = std::variant<LaurentQPair, LaurentFpPair, PadicPair>;

/** A parsed map file: field descriptor, degree, and the pair itself. */
struct LoadedMap {
  FieldDesc field;
  long degree = 0;
  AnyPair pair;
  std::string path;        // as given on the command line
  std::size_t bytes = 0;   // raw size of the document
  std::uint64_t hash = 0;  // FNV-1a of the raw document
};

namespace detail {

inline const nlohmann::json& member(const nlohmann::json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw parse_error(std::string("map file: missing \"") + key + "\"");
  return *it;
}

inline long small_integer(const nlohmann::json& v, const char* what) {
  if (!v.is_number_integer())
    throw parse_error(std::string("map file: ") + what + " must be an integer");
  return v.get<long>();
}

inline std::string text_member(const nlohmann::json& doc, const char* key) {
  const nlohmann::json& v = member(doc, key);
  if (!v.is_string()) throw parse_error(std::string("map file: \"") + key + "\" must be a string");
  return v.get<std::string>();
}

inline FieldDesc parse_field(const nlohmann::json& doc) {
  const nlohmann::json& f = member(doc, "field");
  if (!f.is_object()) throw parse_error("map file: \"field\" must be an object");

  FieldDesc out;
  out.kind = text_member(f, "kind");
  if (out.kind != "laurent" && out.kind != "padic")
    throw parse_error("map file: field kind must be \"laurent\" or \"padic\"");

  if (out.kind == "padic") {
    out.residue = "Fp";
    if (f.contains("residue") && f["residue"] != nlohmann::json("Fp"))
      throw parse_error("map file: the p-adic field has residue \"Fp\"");
    out.p = static_cast<std::uint64_t>(small_integer(member(f, "p"), "\"p\""));
    require_prime_modulus(out.p);
    if (f.contains("ramification") && small_integer(f["ramification"], "\"ramification\"") != 1)
      throw parse_error("map file: the p-adic backend is unramified; ramification must be 1");
    return out;
  }

  out.residue = text_member(f, "residue");
  if (out.residue == "Fp") {
    out.p = static_cast<std::uint64_t>(small_integer(member(f, "p"), "\"p\""));
    require_prime_modulus(out.p);
  } else if (out.residue != "Q") {
    throw parse_error("map file: residue field must be \"Q\" or \"Fp\"");
  }
  if (f.contains("ramification")) {
    out.ramification = small_integer(f["ramification"], "\"ramification\"");
    if (out.ramification < 1) throw parse_error("map file: ramification must be a positive integer");
  }
  return out;
}

/** One coefficient row, X^d coefficient first, into a binary form. */
template <typename S>
BinaryForm<S> form_from_list(const nlohmann::json& list, long d, const S& proto, const char* what) {
  if (!list.is_array() || list.size() != static_cast<std::size_t>(d + 1))
    throw parse_error(std::string("map file: ") + what + " must list exactly degree + 1 coefficients");
  BinaryForm<S> form(d, proto);
  for (long j = 0; j <= d; ++j) {
    const nlohmann::json& cell = list[static_cast<std::size_t>(j)];
    if (!cell.is_string())
      throw parse_error(std::string("map file: ") + what + " entries must be scalar strings");
    form.set_coeff(d - j, scalar_parse(proto, cell.get<std::string>()));
  }
  return form;
}

template <typename S>
AnyPair pair_from_doc(const nlohmann::json& doc, long d, const S& proto) {
  return AnyPair(HomogeneousPair<S>(form_from_list(member(doc, "numerator"), d, proto, "\"numerator\""),
                                    form_from_list(member(doc, "denominator"), d, proto, "\"denominator\"")));
}

}  // namespace detail

/** Build the pair described by an already-parsed document. */
inline LoadedMap load_map_document(const nlohmann::json& doc, std::string path, std::string_view raw) {
  if (!doc.is_object()) throw parse_error("map file: top level must be a JSON object");
  FieldDesc fd = detail::parse_field(doc);
  const long d = detail::small_integer(detail::member(doc, "degree"), "\"degree\"");
  if (d < 1) throw parse_error("map file: degree must be at least 1");

  AnyPair pair = [&]() -> AnyPair {
    if (fd.kind == "padic") return detail::pair_from_doc(doc, d, Padic(Rat(0), fd.p));
    if (fd.residue == "Fp")
      return detail::pair_from_doc(doc, d, Puiseux<Fp>(Fp(0, fd.p), fd.ramification));
    return detail::pair_from_doc(doc, d, Puiseux<Rat>(Rat(0), fd.ramification));
  }();

  const bool all_zero = std::visit([](const auto& p) { return p.min_ord().is_infinite(); }, pair);
  if (all_zero) throw parse_error("map file: all coefficients are zero");

  LoadedMap out{std::move(fd), d, std::move(pair), std::move(path), raw.size(), fnv1a64(raw)};
  return out;
}

/** Read, hash, and parse a map file from disk. */
inline LoadedMap load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open map file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string raw = buf.str();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("map file " + path + ": " + e.what());
  }
  return load_map_document(doc, path, raw);
}

}  // namespace tool
}  // namespace berkres

#endif  // BERKRES_TOOLS_MAPFILE_HPP
