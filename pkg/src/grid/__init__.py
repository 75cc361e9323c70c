from src.grid.components import (ComponentLabeling, ConnectednessVerdict,
                                 UnionFind, connected_components,
                                 connectedness_verdict, distance_to_set,
                                 distances_to_set)
from src.grid.lattice import (BoxDomain, RegularGrid, cell_slack, sample,
                              sample_with_gradient)
from src.grid.masks import (CellMask, critical_mask, level_mask,
                            sublevel_mask, touches_boundary)

__all__ = ['BoxDomain', 'CellMask', 'ComponentLabeling',
           'ConnectednessVerdict', 'RegularGrid', 'UnionFind', 'cell_slack',
           'connected_components', 'connectedness_verdict', 'critical_mask',
           'distance_to_set', 'distances_to_set', 'level_mask', 'sample',
           'sample_with_gradient', 'sublevel_mask', 'touches_boundary']
