#include "hetseg/rng.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace hetseg {

struct Rng::Impl {
    explicit Impl(std::uint64_t seed) : engine(seed) {}
    std::mt19937_64 engine;
    boost::random::normal_distribution<double> normal;
    boost::random::uniform_01<double> uniform;
};

Rng::Rng(std::uint64_t seed) : impl_(std::make_unique<Impl>(seed)) {}
Rng::Rng(Rng&&) noexcept = default;
Rng& Rng::operator=(Rng&&) noexcept = default;
Rng::~Rng() = default;

double Rng::normal() { return impl_->normal(impl_->engine); }
double Rng::uniform() { return impl_->uniform(impl_->engine); }
std::uint64_t Rng::next_u64() { return impl_->engine(); }

}  // namespace hetseg
