//! Configurations shipped with the binary.

const PRESETS: &[(&str, &str)] = &[
    ("divergent-r", include_str!("../presets/divergent-r.conf")),
    ("divergent-g", include_str!("../presets/divergent-g.conf")),
    ("ferro-series", include_str!("../presets/ferro-series.conf")),
    ("linear-cap", include_str!("../presets/linear-cap.conf")),
    ("linear-resistor", include_str!("../presets/linear-resistor.conf")),
    ("tangent-pinch", include_str!("../presets/tangent-pinch.conf")),
    ("twisted-pinch", include_str!("../presets/twisted-pinch.conf")),
];

pub fn get(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}
