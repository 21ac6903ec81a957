//! Presets bundled into the binary so they work from any directory.

pub struct Preset {
    pub name: &'static str,
    pub command: &'static str,
    pub json: &'static str,
}

macro_rules! preset {
    ($command:literal, $name:literal) => {
        Preset { name: $name, command: $command, json: include_str!(concat!("../presets/", $name, ".json")) }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!("spectrum", "laplacian"),
    preset!("spectrum", "complex_dimer_gap_closing"),
    preset!("spectrum", "complex_dimer_gap_closed"),
    preset!("spectrum", "complex_trimer_gap_closing"),
    preset!("openlimit", "complex_dimer_open_limit"),
    preset!("openlimit", "real_dimer_open_limit"),
    preset!("openlimit", "scalar_open_limit"),
    preset!("interface", "complex_dimer_interface"),
    preset!("interface", "complex_dimer_interface_detuned"),
    preset!("interface", "complex_trimer_interface"),
    preset!("interface", "real_edge_dimer_interface"),
    preset!("interface", "coupled_dimer_interface"),
    preset!("interface", "coupled_dimer_interface_weak_b2"),
    preset!("resonators", "resonator_edge_dipole"),
    preset!("resonators", "resonator_matched_monopole"),
    preset!("resonators", "resonator_edge_dipole_spacing_sweep"),
    preset!("resonators", "resonator_matched_monopole_spacing_sweep"),
    preset!("resonators", "resonator_spacing_noise"),
    preset!("disorder", "ssh_disorder_real"),
    preset!("disorder", "ssh_disorder_complex"),
    preset!("disorder", "ssh_decay_rates"),
    preset!("disorder", "four_periodic_disorder"),
    preset!("fdm", "fdm_dimer"),
    preset!("fdm", "fdm_homogeneous"),
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn description(p: &Preset) -> String {
    serde_json::from_str::<serde_json::Value>(p.json)
        .ok()
        .and_then(|v| v.get("description").and_then(|d| d.as_str()).map(str::to_owned))
        .unwrap_or_default()
}
