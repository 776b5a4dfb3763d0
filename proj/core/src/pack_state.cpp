#include "stackbench/solvers.hpp"

namespace stackbench {

PackState::PackState(Container container)
    : container_(container), heightmap_(Heightmap::for_container(container)) {
  container_.validate();
}

PackState::PackState(Container container, Heightmap heightmap)
    : container_(container), heightmap_(std::move(heightmap)) {
  container_.validate();
  if (heightmap_.nx() != container_.nx() || heightmap_.ny() != container_.ny()) {
    throw ContractViolation("heightmap grid does not match container");
  }
}

const std::vector<Ems>& PackState::ems() const {
  if (!ems_) ems_ = compute_ems(heightmap_, container_);
  return *ems_;
}

void PackState::commit(const Placement& placement) {
  const CellBox b = placement.cells(container_.cell_size);
  if (!heightmap_.in_bounds(b.x, b.y, b.dx, b.dy)) {
    throw ContractViolation("placement '" + placement.item_id + "' leaves the container");
  }
  const int rest = footprint_height_cells(heightmap_, b.x, b.y, b.dx, b.dy);
  const int top = rest + b.dz;
  if (top > container_.nz()) {
    throw ContractViolation("placement '" + placement.item_id + "' exceeds container height");
  }
  raise_footprint(heightmap_, b.x, b.y, b.dx, b.dy, top);
  if (ems_) ems_ = update_ems(*ems_, b.x, b.y, b.dx, b.dy, top, container_.nz());
  placements_.push_back(placement);
}

}  // namespace stackbench
