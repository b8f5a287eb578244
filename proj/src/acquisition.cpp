#include "mural/acquisition.hpp"

#include <stdexcept>
#include <string>

#include "mural/errors.hpp"
#include "mural/metrics.hpp"

namespace mural {

std::vector<ObjectGrant> objects_for_region(const ImageRecord& image,
                                            const BBox& region,
                                            const RunConfig& config,
                                            const DatasetState& state,
                                            const std::set<int64_t>& taken) {
  std::vector<ObjectGrant> grants;
  for (const GroundTruthObject& obj : image.objects) {
    if (state.labeled_objects.contains(obj.object_id)) continue;
    if (taken.contains(obj.object_id)) continue;
    const double overlap = config.overlap_rule == OverlapRule::kCoverage
                               ? coverage_fraction(obj.box, region)
                               : iou(obj.box, region);
    if (!(overlap > config.overlap_threshold)) continue;
    auto clipped = clip_box(obj.box, region);
    if (!clipped) continue;  // overlap > 0 implies intersection; defensive
    grants.push_back(ObjectGrant{obj.object_id, obj.class_id, *clipped});
  }
  return grants;
}

CycleReport commit_grants(DatasetState& state, const Dataset& dataset,
                          const std::vector<RegionGrant>& grants,
                          int64_t budget_requested, int num_scales,
                          std::vector<AcquisitionRecord>* audit) {
  CycleReport report;
  report.cycle_index = state.cycle_index;
  report.budget_requested = budget_requested;
  report.regions_selected = static_cast<int64_t>(grants.size());
  report.annotated_per_class.assign(
      static_cast<size_t>(dataset.vocab().size()), 0);
  report.annotated_per_scale.assign(static_cast<size_t>(num_scales), 0);

  for (const RegionGrant& grant : grants) {
    state.labeled_regions.push_back(
        LabeledRegion{grant.image_id, grant.region, grant.scale_index});
    for (const ObjectGrant& obj : grant.objects) {
      if (!state.labeled_objects.emplace(obj.object_id, obj.clipped).second) {
        throw std::logic_error("grant re-labels object id=" +
                               std::to_string(obj.object_id));
      }
      ++report.annotated_per_class.at(static_cast<size_t>(obj.class_id));
      ++report.annotated_per_scale.at(static_cast<size_t>(grant.scale_index));
      ++report.budget_consumed;
      if (audit != nullptr) {
        audit->push_back(AcquisitionRecord{state.cycle_index, obj.object_id,
                                           grant.image_id, grant.scale_index,
                                           grant.region, obj.clipped});
      }
    }
  }

  state.unlabeled_images.clear();
  for (const ImageRecord& image : dataset.images()) {
    for (const GroundTruthObject& obj : image.objects) {
      if (!state.labeled_objects.contains(obj.object_id)) {
        state.unlabeled_images.insert(image.image_id);
        break;
      }
    }
  }
  ++state.cycle_index;

  report.selected_class_entropy = entropy_nats(report.annotated_per_class);
  report.kl_to_uniform = kl_to_uniform_nats(report.annotated_per_class);
  return report;
}

CycleReport acquire(DatasetState& state, const Dataset& dataset,
                    const SelectionResult& selection, const RunConfig& config,
                    std::vector<AcquisitionRecord>* audit) {
  if (selection.cycle_index != state.cycle_index) {
    throw InputError("stale selection: made at cycle " +
                     std::to_string(selection.cycle_index) +
                     " but state is at cycle " +
                     std::to_string(state.cycle_index));
  }
  std::set<int64_t> taken;
  std::vector<RegionGrant> grants;
  grants.reserve(selection.selected.size());
  for (const RegionCandidate& candidate : selection.selected) {
    const ImageRecord* image = dataset.find_image(candidate.image_id);
    if (image == nullptr) {
      throw InputError("selection references unknown image id=" +
                       std::to_string(candidate.image_id));
    }
    RegionGrant grant;
    grant.image_id = candidate.image_id;
    grant.scale_index = candidate.scale_index;
    grant.region = candidate.region_original;
    grant.objects = objects_for_region(*image, candidate.region_original,
                                       config, state, taken);
    for (const ObjectGrant& obj : grant.objects) taken.insert(obj.object_id);
    grants.push_back(std::move(grant));
  }
  return commit_grants(state, dataset, grants, selection.budget_requested,
                       config.num_scales(), audit);
}

}  // namespace mural
