#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wntags/repository/repository.hpp"

namespace wntags::repository {

struct AgreementOptions {
  std::size_t bins = 5;
  // Kappa below this marks a tag for re-annotation.
  double inadequate_below = 0.4;
};

// Equal-width bin of a weight in [0, 1]; 1.0 lands in the top bin.
std::size_t weight_bin(double weight, std::size_t bins);

// Fleiss' kappa over items that each carry >= 2 continuous ratings,
// discretized into `bins`. Items may have different rater counts.
// Returns 1 when every rating falls in a single bin overall.
double fleiss_kappa(std::span<const std::vector<double>> items, std::size_t bins);

struct TagAgreement {
  Sense sense;
  ImageId image{};
  double kappa = 1.0;  // in [-1, 1]
  std::size_t raters = 0;
  double observed = 1.0;  // share of agreeing rater pairs on this tag
  double expected = 0.0;  // chance agreement from repository-wide bin shares
  bool inadequate = false;
  double threshold = 0.4;
};

// Per-tag Fleiss-style kappa: the tag's observed pairwise agreement set
// against chance agreement from the bin distribution of every multiply
// rated tag in the repository. Averaged over all such tags it equals
// fleiss_kappa on the same data (before the clamp at -1).
// Throws unknown_image, unknown_sense (tag absent), insufficient_raters,
// invalid_argument (bins == 0).
TagAgreement tag_agreement(const Repository& repo, ImageId id, const Sense& sense,
                           const AgreementOptions& options = {});

struct AgreementReport {
  double kappa = 1.0;  // fleiss_kappa over all multiply rated tags
  std::size_t rated_tags = 0;
  std::vector<TagAgreement> tags;
};

AgreementReport agreement_report(const Repository& repo, const AgreementOptions& options = {});

}  // namespace wntags::repository
