//! The comb dendrite: a unit spine with spikes of height `1/D_n` attached at
//! the level-`n` grid points, and the map `f` that walks spike tops through
//! the levels while folding everything else onto the spine.

pub mod certificate;
pub mod closed_form;
pub mod map;
pub mod params;
pub mod point;

pub use certificate::{
    comb_certificate, certificate_targets, walk_checkpoints, walk_counts, walk_distance_series,
    walk_state_at, write_orbit_csv, CertificateRow, CombCertificate, LevelCheckpoints,
    LevelEstimate, WalkCounts,
};
pub use closed_form::{
    dc2_absence_scan, dc2half_limit_scan, dyadic_deltas, phi_star_closed_form, scan_grid, ClosedFormDF,
    Dc2HalfScan, Dc2Scan,
};
pub use map::{
    apply_f, boundary_continuity_check, endpoint_convergence_witness, eventually_fixed_time,
    landing_time, orbit, phi_eval, psi_eval, sample_spike_points, spike_top_walk, successor,
    walk_orbit_mismatch, walk_time, LevelWalkState,
};
pub use params::{spike_grid, BaseSchedule, CombParams, SpikeGrid};
pub use point::{distance, DendritePoint};
