#include "percnat/percolation.hpp"

#include "percnat/error.hpp"

#include <json.hpp>

#include <bit>
#include <istream>
#include <ostream>

namespace percnat {

Coloring::Coloring(DomainPtr domain, std::vector<std::uint64_t> bits, RngStream seed_record)
    : domain_(std::move(domain)), bits_(std::move(bits)), seed_(seed_record) {
  bits_.resize((domain_->cell_count() + 127) / 128 * 2, 0);
}

bool Coloring::white(std::int32_t idx) const {
  switch (domain_->kind(idx)) {
    case CellKind::Inner:
      return interior_white(idx);
    case CellKind::Boundary:
      if (!bc_) throw Error(ErrorKind::NoBoundaryCondition, "boundary color requested");
      return boundary_white(*domain_, domain_->cycle_position(idx), *bc_);
    case CellKind::Exterior:
      break;
  }
  throw Error(ErrorKind::NotBoundaryEdge, "exterior site has no color");
}

Coloring Coloring::with_boundary_condition(const BoundaryCondition& bc) const {
  Coloring c = *this;
  c.bc_ = bc;
  return c;
}

Coloring Coloring::swapped() const {
  Coloring c = *this;
  for (auto& w : c.bits_) w = ~w;
  if (c.bc_) c.bc_ = BoundaryCondition{bc_->black_to, bc_->black_from};
  return c;
}

Coloring Coloring::flipped(std::int32_t idx) const {
  Coloring c = *this;
  c.bits_[idx >> 6] ^= std::uint64_t{1} << (idx & 63);
  return c;
}

void Coloring::set_interior(std::int32_t idx, bool w) {
  const std::uint64_t m = std::uint64_t{1} << (idx & 63);
  if (w)
    bits_[idx >> 6] |= m;
  else
    bits_[idx >> 6] &= ~m;
}

std::size_t Coloring::white_inner_count() const {
  std::size_t n = 0;
  for (std::int32_t i : domain_->inner_sites()) n += interior_white(i);
  return n;
}

bool operator==(const Coloring& a, const Coloring& b) {
  if (a.domain_->hash() != b.domain_->hash()) return false;
  const bool bc_eq = a.bc_.has_value() == b.bc_.has_value() &&
                     (!a.bc_ || (a.bc_->black_from == b.bc_->black_from && a.bc_->black_to == b.bc_->black_to));
  if (!bc_eq) return false;
  for (std::int32_t i : a.domain_->inner_sites())
    if (a.interior_white(i) != b.interior_white(i)) return false;
  return true;
}

void sample_bits(const LatticeDomain& domain, const RngStream& rng, std::vector<std::uint64_t>& bits) {
  const std::size_t blocks = (domain.cell_count() + 127) / 128;
  bits.resize(blocks * 2);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto r = rng.block(b);
    bits[2 * b] = (std::uint64_t{r[1]} << 32) | r[0];
    bits[2 * b + 1] = (std::uint64_t{r[3]} << 32) | r[2];
  }
}

Coloring sample_coloring(const DomainPtr& domain, const RngStream& rng) {
  std::vector<std::uint64_t> bits;
  sample_bits(*domain, rng, bits);
  return Coloring(domain, std::move(bits), rng);
}

Coloring uniform_coloring(const DomainPtr& domain, bool white) {
  std::vector<std::uint64_t> bits((domain->cell_count() + 127) / 128 * 2, white ? ~std::uint64_t{0} : 0);
  return Coloring(domain, std::move(bits));
}

Coloring apply_boundary_condition(const Coloring& coloring, char a_label, char b_label) {
  const std::size_t a = coloring.domain().marked_edge(a_label);
  const std::size_t b = coloring.domain().marked_edge(b_label);
  if (a == b)
    throw Error(ErrorKind::SameMarkedEdge,
                std::string("marked points ") + a_label + " and " + b_label + " share a boundary edge");
  return coloring.with_boundary_condition({a, b});
}

void write_coloring(std::ostream& out, const Coloring& c) {
  nlohmann::json h;
  h["eta"] = c.domain().eta();
  h["domain_hash"] = c.domain().hash();
  h["master_seed"] = c.seed_record().master_seed;
  h["stream_id"] = c.seed_record().stream_id;
  h["inner_sites"] = c.domain().inner_sites().size();
  if (c.boundary_condition()) {
    h["bc"] = {c.boundary_condition()->black_from, c.boundary_condition()->black_to};
  }
  out << h.dump() << '\n';
  auto put = [&](std::uint64_t v) {
    do {
      unsigned char byte = v & 0x7f;
      v >>= 7;
      if (v) byte |= 0x80;
      out.put(static_cast<char>(byte));
    } while (v);
  };
  bool current = false;
  std::uint64_t run = 0;
  for (std::int32_t i : c.domain().inner_sites()) {
    if (c.interior_white(i) != current) {
      put(run);
      run = 0;
      current = !current;
    }
    ++run;
  }
  put(run);
}

Coloring read_coloring(std::istream& in, const DomainPtr& domain) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::FormatError, "missing header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::FormatError, e.what());
  }
  std::uint64_t hash = 0;
  RngStream seed{};
  try {
    hash = h.at("domain_hash").get<std::uint64_t>();
    seed = RngStream{h.at("master_seed").get<std::uint64_t>(), h.at("stream_id").get<std::uint64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::FormatError, e.what());
  }
  if (hash != domain->hash()) throw Error(ErrorKind::FormatError, "coloring was written for a different domain");
  Coloring c = uniform_coloring(domain, false);
  auto get = [&]() {
    std::uint64_t v = 0;
    for (int shift = 0;; shift += 7) {
      const int ch = in.get();
      if (ch == EOF || shift > 63) throw Error(ErrorKind::FormatError, "truncated run length");
      v |= static_cast<std::uint64_t>(ch & 0x7f) << shift;
      if (!(ch & 0x80)) return v;
    }
  };
  const auto& inner = domain->inner_sites();
  std::size_t k = 0;
  bool current = false;
  while (k < inner.size()) {
    const std::uint64_t run = get();
    if (run > inner.size() - k) throw Error(ErrorKind::FormatError, "run overflows the domain");
    for (std::uint64_t r = 0; r < run; ++r) c.set_interior(inner[k++], current);
    current = !current;
  }
  Coloring out(domain, c.bits(), seed);
  if (h.contains("bc")) out = out.with_boundary_condition({h["bc"][0].get<std::size_t>(), h["bc"][1].get<std::size_t>()});
  return out;
}

}  // namespace percnat
