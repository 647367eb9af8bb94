#include "wntags/repository/agreement.hpp"

#include <algorithm>
#include <cmath>

#include "wntags/error.hpp"

namespace wntags::repository {

namespace {

void check_bins(std::size_t bins) {
  if (bins == 0) throw Error(Errc::invalid_argument, "agreement needs at least one bin");
}

std::vector<std::size_t> bin_counts(std::span<const double> ratings, std::size_t bins) {
  std::vector<std::size_t> counts(bins, 0);
  for (const double w : ratings) ++counts[weight_bin(w, bins)];
  return counts;
}

// Share of agreeing ordered rater pairs within one item.
double observed_agreement(const std::vector<std::size_t>& counts, std::size_t raters) {
  double pairs = 0.0;
  for (const auto count : counts) {
    const auto c = static_cast<double>(count);
    pairs += c * (c - 1.0);
  }
  return pairs / (static_cast<double>(raters) * static_cast<double>(raters - 1));
}

struct Marginals {
  std::vector<double> totals;
  double ratings = 0.0;

  double chance() const {
    if (ratings == 0.0) return 0.0;
    double pe = 0.0;
    for (const double t : totals) pe += (t / ratings) * (t / ratings);
    return pe;
  }
};

std::vector<double> weights_of(const AnnotatedSense& tag) {
  std::vector<double> out;
  out.reserve(tag.ratings.size());
  for (const auto& r : tag.ratings) out.push_back(r.weight);
  return out;
}

Marginals repository_marginals(const Repository& repo, std::size_t bins) {
  Marginals m;
  m.totals.assign(bins, 0.0);
  for (const auto& [id, record] : repo.images()) {
    for (const auto& tag : record.annotations) {
      if (tag.ratings.size() < 2) continue;
      for (const auto& r : tag.ratings) m.totals[weight_bin(r.weight, bins)] += 1.0;
      m.ratings += static_cast<double>(tag.ratings.size());
    }
  }
  return m;
}

TagAgreement agreement_for(const AnnotatedSense& tag, ImageId id, double chance, std::size_t bins,
                           const AgreementOptions& options) {
  TagAgreement out;
  out.sense = tag.sense;
  out.image = id;
  out.raters = tag.ratings.size();
  out.threshold = options.inadequate_below;
  const auto weights = weights_of(tag);
  const auto counts = bin_counts(weights, bins);
  out.observed = observed_agreement(counts, out.raters);
  out.expected = chance;
  const bool unanimous = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) == 1;
  if (unanimous) {
    out.kappa = 1.0;
  } else {
    out.kappa = std::max(-1.0, (out.observed - chance) / (1.0 - chance));
  }
  out.inadequate = out.kappa < options.inadequate_below;
  return out;
}

}  // namespace

std::size_t weight_bin(double weight, std::size_t bins) {
  check_bins(bins);
  const double clamped = std::clamp(weight, 0.0, 1.0);
  const auto bin = static_cast<std::size_t>(std::floor(clamped * static_cast<double>(bins)));
  return std::min(bin, bins - 1);
}

double fleiss_kappa(std::span<const std::vector<double>> items, std::size_t bins) {
  check_bins(bins);
  Marginals m;
  m.totals.assign(bins, 0.0);
  double observed_sum = 0.0;
  std::size_t item_count = 0;
  for (const auto& item : items) {
    if (item.size() < 2) {
      Error err(Errc::insufficient_raters, "kappa item with fewer than 2 ratings");
      err.with_count(item.size());
      throw err;
    }
    const auto counts = bin_counts(item, bins);
    observed_sum += observed_agreement(counts, item.size());
    for (std::size_t j = 0; j < bins; ++j) m.totals[j] += static_cast<double>(counts[j]);
    m.ratings += static_cast<double>(item.size());
    ++item_count;
  }
  if (item_count == 0) return 1.0;
  const double pe = m.chance();
  const double p_bar = observed_sum / static_cast<double>(item_count);
  if (pe >= 1.0) return 1.0;
  return (p_bar - pe) / (1.0 - pe);
}

TagAgreement tag_agreement(const Repository& repo, ImageId id, const Sense& sense,
                           const AgreementOptions& options) {
  check_bins(options.bins);
  const auto& record = repo.get(id);
  const auto* tag = record.find(sense);
  if (tag == nullptr) {
    throw Error(Errc::unknown_sense, "image " + to_string(id) + " has no tag " + ontology::to_string(sense));
  }
  if (tag->ratings.size() < 2) {
    Error err(Errc::insufficient_raters, "tag " + ontology::to_string(sense) + " has " +
                                             std::to_string(tag->ratings.size()) + " rating(s), needs 2");
    err.with_count(tag->ratings.size());
    throw err;
  }
  return agreement_for(*tag, id, repository_marginals(repo, options.bins).chance(), options.bins, options);
}

AgreementReport agreement_report(const Repository& repo, const AgreementOptions& options) {
  check_bins(options.bins);
  AgreementReport report;
  const double chance = repository_marginals(repo, options.bins).chance();
  std::vector<std::vector<double>> items;
  for (const auto& [id, record] : repo.images()) {
    for (const auto& tag : record.annotations) {
      if (tag.ratings.size() < 2) continue;
      report.tags.push_back(agreement_for(tag, id, chance, options.bins, options));
      items.push_back(weights_of(tag));
    }
  }
  report.rated_tags = items.size();
  report.kappa = fleiss_kappa(items, options.bins);
  return report;
}

}  // namespace wntags::repository
