#include "hybridloc/types.hpp"

#include "hybridloc/errors.hpp"

#include <cmath>

namespace hybridloc {

AnchorLayout::AnchorLayout(std::vector<Anchor> anchors, AnchorId reference)
    : anchors_(std::move(anchors)), reference_(std::move(reference)) {
  int ble = 0;
  bool any_uwb = false;
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    const Anchor& a = anchors_[i];
    if (a.id.empty()) throw ValidationError("anchor id must not be empty");
    if (!a.position.allFinite())
      throw ValidationError("anchor " + a.id + " has a non-finite position");
    if (a.p0 && !std::isfinite(*a.p0))
      throw ValidationError("anchor " + a.id + " has a non-finite p0");
    if (!index_.emplace(a.id, i).second)
      throw ValidationError("duplicate anchor id " + a.id);
    if (a.caps.ble) ++ble;
    any_uwb = any_uwb || a.caps.uwb;
  }
  if (ble < 3)
    throw ValidationError("layout needs at least 3 BLE-capable anchors");
  if (any_uwb) {
    const Anchor* ref = find(reference_);
    if (ref == nullptr)
      throw ValidationError("reference anchor '" + reference_ + "' not in layout");
    if (!ref->caps.uwb)
      throw ValidationError("reference anchor '" + reference_ + "' is not UWB-capable");
  }
}

const Anchor* AnchorLayout::find(const AnchorId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &anchors_[it->second];
}

const Anchor& AnchorLayout::at(const AnchorId& id) const {
  const Anchor* a = find(id);
  if (a == nullptr) throw UnknownAnchor("unknown anchor '" + id + "'");
  return *a;
}

std::vector<const Anchor*> AnchorLayout::ble_anchors() const {
  std::vector<const Anchor*> out;
  for (const Anchor& a : anchors_)
    if (a.caps.ble) out.push_back(&a);
  return out;
}

std::vector<const Anchor*> AnchorLayout::uwb_anchors() const {
  std::vector<const Anchor*> out;
  for (const Anchor& a : anchors_)
    if (a.caps.uwb) out.push_back(&a);
  return out;
}

bool AnchorLayout::has_uwb() const {
  for (const Anchor& a : anchors_)
    if (a.caps.uwb) return true;
  return false;
}

}  // namespace hybridloc
