#include "sqmc/orthobasis.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sqmc {

int OrthonormalBasis::total_size() const {
  int n = 0;
  for (const auto& block : by_degree) n += static_cast<int>(block.size());
  return n;
}

Integer degree_space_dimension(int d, int l) {
  if (l == 0) return 1;
  return binomial(static_cast<unsigned long>(l + d - 1), static_cast<unsigned long>(l));
}

MultiIndexPolynomial rodrigues_polynomial(const MultiIndex& n_tilde) {
  const int d = n_tilde.dim();
  if (d < 1) throw std::invalid_argument("rodrigues_polynomial: empty multi-index");
  const std::uint32_t s = n_tilde.degree();

  // Expand x^n (1 - x_1 - ... - x_d)^s by the multinomial theorem:
  // sum over |beta| <= s of (-1)^{|beta|} s!/(beta! (s-|beta|)!) x^{n+beta}.
  MultiIndexPolynomial base(d);
  const Integer s_fact = factorial(s);
  for (std::uint32_t t = 0; t <= s; ++t) {
    for (const auto& beta : multi_indices_of_degree(d, static_cast<int>(t))) {
      Integer denom = factorial(s - t);
      for (std::uint32_t e : beta.e) denom *= factorial(e);
      Rational c(s_fact, denom);
      c.canonicalize();
      if (t % 2 == 1) c = -c;
      MultiIndex shifted = beta;
      for (int i = 0; i < d; ++i) shifted.e[static_cast<std::size_t>(i)] += n_tilde.e[static_cast<std::size_t>(i)];
      base.add_term(shifted, c);
    }
  }

  MultiIndexPolynomial result = std::move(base);
  for (int i = 0; i < d; ++i) {
    for (std::uint32_t k = 0; k < n_tilde.e[static_cast<std::size_t>(i)]; ++k) {
      result = result.derivative(i);
    }
  }
  return result;
}

OrthonormalBasis build_basis(int d, int max_degree, WithinDegreeOrder order) {
  if (d < 1) throw std::invalid_argument("build_basis: d must be positive");
  if (max_degree < 0) throw std::invalid_argument("build_basis: max_degree must be nonnegative");

  OrthonormalBasis basis;
  basis.d = d;
  basis.max_degree = max_degree;
  basis.by_degree.resize(static_cast<std::size_t>(max_degree) + 1);

  for (int l = 0; l <= max_degree; ++l) {
    auto indices = multi_indices_of_degree(d, l);
    if (order == WithinDegreeOrder::Reversed) {
      std::reverse(indices.begin(), indices.end());
    }
    auto& block = basis.by_degree[static_cast<std::size_t>(l)];
    block.reserve(indices.size());

    // Gram-Schmidt runs within the degree only; the derivative family of a
    // given degree is already orthogonal to every lower degree.
    for (const auto& n_tilde : indices) {
      MultiIndexPolynomial p = rodrigues_polynomial(n_tilde);
      for (const auto& prev : block) {
        Rational proj = poly_inner_product(p, prev.poly) / prev.norm_sq;
        if (proj != 0) p -= prev.poly * proj;
      }
      p.make_primitive();
      if (p.is_zero()) {
        throw std::logic_error("build_basis: Gram-Schmidt hit an exactly zero polynomial");
      }
      Rational norm_sq = poly_inner_product(p, p);
      block.push_back(BasisFunction{std::move(p), std::move(norm_sq)});
    }
    if (static_cast<Integer>(block.size()) != degree_space_dimension(d, l)) {
      throw std::logic_error("build_basis: wrong block size");
    }
  }
  return basis;
}

std::shared_ptr<const OrthonormalBasis> shared_basis(int d, int max_degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const OrthonormalBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(d, max_degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // Reuse a wider table when one is already built.
  for (const auto& [k, v] : cache) {
    if (k.first == d && k.second >= max_degree) return v;
  }
  auto built = std::make_shared<OrthonormalBasis>(build_basis(d, max_degree));
  cache.emplace(key, built);
  return built;
}

namespace {

nlohmann::ordered_json poly_to_json(const MultiIndexPolynomial& p) {
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& [idx, c] : p.terms()) {
    terms.push_back({{"e", idx.e}, {"c", rational_to_string(c)}});
  }
  return terms;
}

MultiIndexPolynomial poly_from_json(int d, const nlohmann::json& terms) {
  MultiIndexPolynomial p(d);
  for (const auto& t : terms) {
    MultiIndex idx(t.at("e").get<std::vector<std::uint32_t>>());
    p.add_term(idx, rational_from_string(t.at("c").get<std::string>()));
  }
  return p;
}

}  // namespace

std::uint64_t basis_content_hash(const OrthonormalBasis& basis) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mix(std::to_string(basis.d));
  mix(std::to_string(basis.max_degree));
  for (const auto& block : basis.by_degree) {
    for (const auto& f : block) {
      for (const auto& [idx, c] : f.poly.terms()) {
        for (auto e : idx.e) mix(std::to_string(e));
        mix(rational_to_string(c));
      }
      mix(rational_to_string(f.norm_sq));
    }
  }
  return h;
}

std::string basis_to_json(const OrthonormalBasis& basis) {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["d"] = basis.d;
  doc["max_degree"] = basis.max_degree;
  nlohmann::ordered_json degrees = nlohmann::ordered_json::array();
  for (int l = 0; l <= basis.max_degree; ++l) {
    nlohmann::ordered_json block = nlohmann::ordered_json::array();
    for (const auto& f : basis.by_degree[static_cast<std::size_t>(l)]) {
      block.push_back({{"norm_sq", rational_to_string(f.norm_sq)}, {"terms", poly_to_json(f.poly)}});
    }
    degrees.push_back({{"degree", l}, {"polynomials", block}});
  }
  doc["degrees"] = std::move(degrees);
  doc["content_hash"] = basis_content_hash(basis);
  return doc.dump();
}

OrthonormalBasis basis_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (doc.at("schema").get<int>() != 1) {
    throw std::invalid_argument("basis_from_json: unsupported schema");
  }
  OrthonormalBasis basis;
  basis.d = doc.at("d").get<int>();
  basis.max_degree = doc.at("max_degree").get<int>();
  basis.by_degree.resize(static_cast<std::size_t>(basis.max_degree) + 1);
  for (const auto& entry : doc.at("degrees")) {
    const int l = entry.at("degree").get<int>();
    auto& block = basis.by_degree.at(static_cast<std::size_t>(l));
    for (const auto& pj : entry.at("polynomials")) {
      BasisFunction f{poly_from_json(basis.d, pj.at("terms")),
                      rational_from_string(pj.at("norm_sq").get<std::string>())};
      block.push_back(std::move(f));
    }
  }
  if (doc.contains("content_hash") &&
      doc.at("content_hash").get<std::uint64_t>() != basis_content_hash(basis)) {
    throw std::invalid_argument("basis_from_json: content hash mismatch");
  }
  return basis;
}

void save_basis(const OrthonormalBasis& basis, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_basis: cannot open " + path);
  out << basis_to_json(basis);
}

OrthonormalBasis load_basis(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_basis: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return basis_from_json(buf.str());
}

}  // namespace sqmc
