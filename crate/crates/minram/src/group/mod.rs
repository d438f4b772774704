//! Finite l-group engine on polycyclic presentations.

pub mod pcgroup;
pub mod series;
pub mod tower;

pub use pcgroup::{Elt, Enumeration, Letter, PcGroup, PcGroupJson};
pub use series::{center, series_report, SeriesReport};
pub use tower::{
    boston_bound, central_tower_plan, paper_bound, sgl3_family, sgl3_group, BoundFormula,
    BoundReport, CentralTowerPlan, GroupJson, NilpotentGroup, Sgl3Family, StepKind, TowerStep,
};
