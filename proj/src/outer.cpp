#include "prering/outer.hpp"

#include <memory>
#include <mutex>
#include <utility>

#include "prering/errors.hpp"

namespace prering {

namespace {

// Exact accumulation is affordable while denominators stay this narrow;
// wider cell measures switch to upward grid rounding.
constexpr unsigned kExactDenBits = 256;
constexpr unsigned kGridDigits = 40;

unsigned bits_of(const Int& v) {
  if (v == 0) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(abs(v))) + 1;
}

Int ceil_div_pos(const Int& a, const Int& b) {
  Int q = a / b;
  if (q * b != a) ++q;
  return q;
}

}  // namespace

CoverCertificate CoverCertificate::from_generator(Generator gen, Rat bound,
                                                  std::string generator_name,
                                                  std::int64_t finite_size) {
  if (!gen) fail(ErrorCode::BadInput, "cover certificate needs a generator");
  CoverCertificate c;
  c.gen_ = std::move(gen);
  c.bound_ = std::move(bound);
  c.name_ = std::move(generator_name);
  c.finite_size_ = finite_size < 0 ? -1 : finite_size;
  return c;
}

CoverCertificate CoverCertificate::from_cells(std::vector<Cell> cells,
                                              Rat bound,
                                              std::string generator_name) {
  auto stored = std::make_shared<std::vector<Cell>>(std::move(cells));
  auto size = static_cast<std::int64_t>(stored->size());
  return from_generator(
      [stored](std::int64_t n) { return (*stored)[static_cast<size_t>(n)]; },
      std::move(bound), std::move(generator_name), size);
}

Cell CoverCertificate::cell(std::int64_t n) const {
  if (n < 0 || (finite_size_ >= 0 && n >= finite_size_))
    fail(ErrorCode::BadInput, "cover cell index out of range");
  return gen_(n);
}

std::vector<Cell> CoverCertificate::prefix(std::int64_t n) const {
  if (finite_size_ >= 0 && n > finite_size_) n = finite_size_;
  std::vector<Cell> out;
  out.reserve(static_cast<size_t>(n > 0 ? n : 0));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(gen_(i));
  return out;
}

void CoverCertificate::verify_prefix_sums(const Measure& v,
                                          std::int64_t n) const {
  if (finite_size_ >= 0 && n > finite_size_) n = finite_size_;
  Int grid = pow10(kGridDigits);
  Rat exact_sum(0);
  Int grid_units(0);
  for (std::int64_t i = 0; i < n; ++i) {
    Rat m = v(gen_(i));
    if (m < 0) fail(ErrorCode::GeneratorInvalid, "cover cell with negative measure");
    if (bits_of(den(m)) <= kExactDenBits) {
      exact_sum += m;
    } else {
      grid_units += ceil_div_pos(num(m) * grid, den(m));
    }
    if (bits_of(den(exact_sum)) > kExactDenBits) {
      // Fold the running sum onto the grid before it gets unwieldy.
      grid_units += ceil_div_pos(num(exact_sum) * grid, den(exact_sum));
      exact_sum = Rat(0);
    }
  }
  Rat total_up = exact_sum + Rat(grid_units, grid);
  if (total_up > bound_)
    fail(ErrorCode::GeneratorInvalid,
         "cover prefix sum exceeds the declared bound");
}

bool CoverCertificate::covers_point(const Rat& x, std::int64_t n) const {
  if (finite_size_ >= 0 && n > finite_size_) n = finite_size_;
  for (std::int64_t i = 0; i < n; ++i)
    if (gen_(i).contains1(x)) return true;
  return false;
}

CoverCertificate merge_covers(const CoverCertificate& a,
                              const CoverCertificate& b) {
  Rat bound = a.bound() + b.bound();
  std::string name;
  if (!a.generator_name().empty() || !b.generator_name().empty())
    name = a.generator_name() + "+" + b.generator_name();
  std::int64_t sa = a.finite_size(), sb = b.finite_size();
  CoverCertificate ca = a, cb = b;
  if (sa >= 0) {
    // Finite head, then everything from b.
    std::int64_t size = sb >= 0 ? sa + sb : -1;
    return CoverCertificate::from_generator(
        [ca, cb, sa](std::int64_t n) {
          return n < sa ? ca.cell(n) : cb.cell(n - sa);
        },
        std::move(bound), std::move(name), size);
  }
  if (sb >= 0) return merge_covers(b, a);
  // Both countable: interleave.
  return CoverCertificate::from_generator(
      [ca, cb](std::int64_t n) {
        return (n & 1) == 0 ? ca.cell(n / 2) : cb.cell(n / 2);
      },
      std::move(bound), std::move(name), -1);
}

namespace {

constexpr int kCantorLevelCap = 39;      // 3^level must fit in int64
constexpr int kCantorMaterializeCap = 14;

Int pow3(int k) {
  Int acc(1);
  for (int i = 0; i < k; ++i) acc *= 3;
  return acc;
}

std::int64_t cantor_address(std::int64_t index, int level) {
  std::int64_t a = 0;
  for (int b = level - 1; b >= 0; --b) a = 3 * a + 2 * ((index >> b) & 1);
  return a;
}

}  // namespace

Cell CantorCover::cell(std::int64_t index) const {
  if (index < 0 || index >= count)
    fail(ErrorCode::BadInput, "cantor cell index out of range");
  Int unit = pow3(level);
  std::int64_t a = cantor_address(index, level);
  return Cell::closed_interval(Rat(Int(a), unit), Rat(Int(a) + 1, unit));
}

SimpleSet CantorCover::set() const {
  if (level > kCantorMaterializeCap)
    fail(ErrorCode::BadInput,
         "cantor set materialization is capped at level 14; use cell()");
  std::vector<Cell> cells;
  cells.reserve(static_cast<size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) cells.push_back(cell(i));
  return SimpleSet::from_disjoint(1, std::move(cells));
}

CoverCertificate CantorCover::certificate() const {
  CantorCover self = *this;
  return CoverCertificate::from_generator(
      [self](std::int64_t n) { return self.cell(n); }, measure,
      "cantor-level-" + std::to_string(level), count);
}

CantorCover cantor_cover(int k) {
  if (k < 0 || k > kCantorLevelCap)
    fail(ErrorCode::BadInput, "cantor level must be in [0, 39]");
  CantorCover c;
  c.level = k;
  c.count = std::int64_t(1) << k;
  c.measure = pow_rat(Rat(2, 3), static_cast<unsigned>(k));
  return c;
}

bool cantor_nested_exact(int k) {
  if (k < 0 || k > kCantorLevelCap)
    fail(ErrorCode::BadInput, "cantor level must be in [0, 39]");
  if (k == 0) return true;
  // addr[d] is the address of the current path's node at depth d, in
  // units of 3^-d. Walking leaf indices in order only re-derives the
  // addresses below the highest flipped bit, so the scan is linear.
  std::vector<std::int64_t> addr(static_cast<size_t>(k) + 1, 0);
  std::int64_t leaves = std::int64_t(1) << k;
  std::int64_t prev = -2;
  for (std::int64_t i = 0; i < leaves; ++i) {
    int top = k;  // depth above which addresses are unchanged
    if (i > 0) {
      std::uint64_t diff = static_cast<std::uint64_t>(i ^ (i - 1));
      int hb = 63 - __builtin_clzll(diff);
      top = hb + 1;  // bit hb corresponds to depth k - 1 - hb
    }
    for (int d = k - top; d < k; ++d) {
      std::int64_t b = (i >> (k - 1 - d)) & 1;
      std::int64_t child = 3 * addr[static_cast<size_t>(d)] + 2 * b;
      // Child interval [child, child+1] must sit inside the parent
      // interval [3a, 3a+3] in the child's units.
      if (child < 3 * addr[static_cast<size_t>(d)] ||
          child + 1 > 3 * addr[static_cast<size_t>(d)] + 3)
        return false;
      addr[static_cast<size_t>(d) + 1] = child;
    }
    std::int64_t leaf = addr[static_cast<size_t>(k)];
    if (leaf < prev + 2) return false;  // disjoint with at least unit gaps
    prev = leaf;
  }
  return true;
}

CoverCertificate null_certificate_countable(
    std::function<Rat(std::int64_t)> points, const Rat& eps, std::string name,
    std::int64_t finite_count) {
  if (eps <= 0) fail(ErrorCode::BadInput, "null certificate needs eps > 0");
  if (!points) {
    return CoverCertificate::from_cells({}, Rat(0), std::move(name));
  }
  Rat eps_copy = eps;
  auto gen = [points, eps_copy](std::int64_t n) {
    Rat q = points(n);
    Rat h = eps_copy / Rat(pow2(static_cast<unsigned>(n) + 3));
    return Cell::closed_interval(q - h, q + h);
  };
  return CoverCertificate::from_generator(std::move(gen), eps,
                                          std::move(name), finite_count);
}

std::function<Rat(std::int64_t)> named_point_generator(
    const std::string& name) {
  if (name == "rationals-unit-interval") {
    // p/d swept by denominator, coprime numerators only, so every
    // rational of [0,1] appears exactly once: 0, 1, 1/2, 1/3, 2/3, ...
    struct Table {
      std::vector<Rat> vals;
      Int d{1};
      Int p{0};
      std::mutex mu;
    };
    auto table = std::make_shared<Table>();
    return [table](std::int64_t n) {
      std::lock_guard<std::mutex> lock(table->mu);
      while (static_cast<std::int64_t>(table->vals.size()) <= n) {
        if (table->p > table->d) {
          table->d += 1;
          table->p = 1;
          continue;
        }
        if (gcd(table->p, table->d) == 1)
          table->vals.emplace_back(table->p, table->d);
        table->p += 1;
      }
      return table->vals[static_cast<size_t>(n)];
    };
  }
  fail(ErrorCode::BadInput, "unknown point generator: " + name);
}

Bracket outer_measure(const SimpleSet& target, const Measure& v,
                      const Rat& eps) {
  if (eps <= 0) fail(ErrorCode::BadInput, "outer_measure needs eps > 0");
  Rat exact = v.on_simple(target);
  return Bracket{exact, exact};
}

Bracket outer_measure(const OuterRecipe& recipe, const Measure& v,
                      const Rat& eps) {
  if (eps <= 0) fail(ErrorCode::BadInput, "outer_measure needs eps > 0");
  Rat lower(0);
  for (const SimpleSet& s : recipe.inner) {
    Rat m = v.on_simple(s);
    if (m > lower) lower = m;
  }
  bool have_upper = false;
  Rat upper(0);
  for (const CoverCertificate& c : recipe.covers) {
    if (!have_upper || c.bound() < upper) {
      upper = c.bound();
      have_upper = true;
    }
    if (have_upper && upper - lower <= eps) return Bracket{lower, upper};
  }
  fail(ErrorCode::ToleranceUnreachable,
       "no declared cover brings the outer bracket within eps");
}

namespace {

bool fattening_supported(const Measure& v, const SimpleSet& target) {
  if (target.dims() != 1) return false;
  if (v.kind() == MeasureKind::kLength) return true;
  return v.kind() == MeasureKind::kVolume && v.expected_dims() <= 1;
}

// Open fattening of cell j by eps * 2^-(j+2) on each side.
Cell fatten(const Cell& c, const Rat& eps, size_t j) {
  Rat delta = eps / Rat(pow2(static_cast<unsigned>(j) + 2));
  const Interval& b = c.bound(0);
  return Cell::interval(b.lo.value - delta, false, b.hi.value + delta, false);
}

}  // namespace

SimpleSet approx_by_Vsigma(const SimpleSet& target, const Measure& v,
                           const Rat& eps) {
  if (eps <= 0) fail(ErrorCode::BadInput, "approx_by_Vsigma needs eps > 0");
  if (!fattening_supported(v, target)) return target;
  // Half-open [a, b) cells are already countable-union material and pass
  // through unchanged; a closed right endpoint is absorbed by pushing the
  // cell's end out by eps * 2^-(j+2), which keeps the total slack under
  // eps / 2.
  SimpleSet acc(target.dims());
  for (size_t j = 0; j < target.cells().size(); ++j) {
    const Interval& b = target.cells()[j].bound(0);
    Cell c = target.cells()[j];
    if (b.hi.closed) {
      Rat delta = eps / Rat(pow2(static_cast<unsigned>(j) + 2));
      c = Cell::interval(b.lo.value, b.lo.closed, b.hi.value + delta, false);
    }
    acc = simple_union(acc, SimpleSet::single(c));
  }
  return acc;
}

CoverCertificate outer_regular_cover(const SimpleSet& target, const Rat& eps,
                                     const Measure& v) {
  if (eps <= 0) fail(ErrorCode::BadInput, "outer_regular_cover needs eps > 0");
  if (!fattening_supported(v, target))
    fail(ErrorCode::UnsupportedKind,
         "outer regularity is implemented for the length measure only");
  std::vector<Cell> cells;
  Rat bound(0);
  for (size_t j = 0; j < target.cells().size(); ++j) {
    Cell f = fatten(target.cells()[j], eps, j);
    bound += v(f);
    cells.push_back(std::move(f));
  }
  return CoverCertificate::from_cells(std::move(cells), std::move(bound));
}

}  // namespace prering
