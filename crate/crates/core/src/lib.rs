pub mod gf2;
pub mod hopf;
pub mod comod;
pub mod resolve;
pub mod oracle;
pub mod bgpoly;
pub mod charts;
pub mod descriptor;
pub mod suites;
