//! Built-in scenarios.

use crate::config::{
    CollinearConfig, ConstellationChoice, DipoleStyleChoice, EmitterSource, FieldChoice, ModelChoice, PairConfig,
    Quantity, RingConfig, RotatedTriangleConfig, Scenario, Spacing, SweepConfig, SweepParameter, SystemConfig,
    TriangleConfig,
};

const BOTH: [ModelChoice; 2] = [ModelChoice::Exact, ModelChoice::Rwa];

pub const PRESETS: [(&str, &str); 14] = [
    ("fig2", "scalar-field pair coupling, exact and RWA, vs separation"),
    ("fig3a", "Re J ratio RWA/exact for x-x and z-z pairs, s in [0.05, 6]"),
    ("fig3b", "coupling ratios for x-x, z-z and scalar pairs, log s in [0.001, 100]"),
    ("fig4a", "x-x pair coupling, exact and RWA, vs separation"),
    ("fig4b", "z-z pair coupling, exact and RWA, vs separation"),
    ("fig5a", "detuned x-x pair at s = 1: decay rates vs detuning"),
    ("fig5b", "x-x pair detuned by 2: decay rates vs separation"),
    ("fig6b", "triangle with apex dipole turned 15 deg: decay rates vs side"),
    ("fig6c", "15 deg triangle decay rates over the near field, s in [0.1, 1.5]"),
    ("fig7", "triangle with apex dipole turned 50 deg: decay rates vs side"),
    ("ring6", "six-emitter ring, out-of-plane dipoles: rates and shifts vs radius"),
    ("line3", "three collinear emitters, parallel dipoles: decay rates vs spacing"),
    ("triangle", "symmetric triangle, normal dipoles: rates and shifts vs side"),
    ("spectrum_xx", "x-x pair at s = 0.5: emission spectrum vs frequency"),
];

pub fn list_presets() -> &'static [(&'static str, &'static str)] {
    &PRESETS
}

fn pair(c: ConstellationChoice, detuning: f64) -> EmitterSource {
    EmitterSource::Pair(PairConfig {
        constellation: c,
        separation: 1.0,
        detuning,
    })
}

fn sweep(parameter: SweepParameter, from: f64, to: f64, points: usize, spacing: Spacing) -> SweepConfig {
    SweepConfig {
        parameter,
        from,
        to,
        points,
        spacing,
    }
}

fn scale(from: f64, to: f64, points: usize) -> SweepConfig {
    sweep(SweepParameter::Scale, from, to, points, Spacing::Linear)
}

fn base(name: &str, emitters: EmitterSource, sweep: SweepConfig, outputs: Vec<Quantity>) -> Scenario {
    Scenario {
        name: Some(name.to_string()),
        description: describe(name).map(str::to_string),
        field_model: FieldChoice::Vector,
        models: BOTH.to_vec(),
        emitters: Some(emitters),
        systems: Vec::new(),
        sweep,
        outputs,
    }
}

fn describe(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, d)| *d)
}

fn system(label: &str, field: Option<FieldChoice>, emitters: EmitterSource) -> SystemConfig {
    SystemConfig {
        label: label.to_string(),
        field_model: field,
        emitters,
    }
}

fn rotated(angle_deg: f64) -> EmitterSource {
    EmitterSource::RotatedTriangle(RotatedTriangleConfig { side: 1.0, angle_deg })
}

pub fn preset(name: &str) -> Option<Scenario> {
    use ConstellationChoice::{Xx, Zz};
    use Quantity::*;
    let s = match name {
        "fig2" => {
            let mut s = base(name, pair(Xx, 0.0), scale(0.05, 5.0, 496), vec![ReJ, ImJ]);
            s.field_model = FieldChoice::Scalar;
            s
        }
        "fig3a" => {
            let mut s = base(name, pair(Xx, 0.0), scale(0.05, 6.0, 596), vec![ReRatio]);
            s.emitters = None;
            s.systems = vec![system("xx", None, pair(Xx, 0.0)), system("zz", None, pair(Zz, 0.0))];
            s
        }
        "fig3b" => {
            let grid = sweep(SweepParameter::Scale, 1e-3, 100.0, 1001, Spacing::Log);
            let mut s = base(name, pair(Xx, 0.0), grid, vec![ReRatio, Mag2Ratio]);
            s.emitters = None;
            s.systems = vec![
                system("xx", None, pair(Xx, 0.0)),
                system("zz", None, pair(Zz, 0.0)),
                system("scalar", Some(FieldChoice::Scalar), pair(Xx, 0.0)),
            ];
            s
        }
        "fig4a" => base(name, pair(Xx, 0.0), scale(0.1, 10.0, 991), vec![ReJ, ImJ]),
        "fig4b" => base(name, pair(Zz, 0.0), scale(0.1, 10.0, 991), vec![ReJ, ImJ]),
        "fig5a" => base(
            name,
            pair(Xx, 1.0),
            sweep(SweepParameter::Detuning, 0.0, 10.0, 2001, Spacing::Linear),
            vec![RateK],
        ),
        "fig5b" => base(
            name,
            pair(Xx, 2.0),
            sweep(SweepParameter::Scale, 0.05, 20.0, 601, Spacing::Log),
            vec![RateK],
        ),
        "fig6b" => base(name, rotated(15.0), scale(0.1, 3.0, 291), vec![RateK]),
        "fig6c" => base(name, rotated(15.0), scale(0.1, 1.5, 281), vec![RateK]),
        "fig7" => base(name, rotated(50.0), scale(0.2, 2.0, 361), vec![RateK]),
        "ring6" => base(
            name,
            EmitterSource::Ring(RingConfig {
                n: 6,
                circumradius: 1.0,
                dipole_style: DipoleStyleChoice::OutOfPlane,
            }),
            sweep(SweepParameter::Scale, 0.05, 10.0, 200, Spacing::Log),
            vec![RateK, ShiftK],
        ),
        "line3" => base(
            name,
            EmitterSource::Collinear(CollinearConfig {
                n: 3,
                spacing: 1.0,
                dipole: [0.0, 0.0, 1.0],
            }),
            scale(0.1, 2.0, 191),
            vec![RateK],
        ),
        "triangle" => base(
            name,
            EmitterSource::SymmetricTriangle(TriangleConfig { side: 1.0 }),
            scale(0.05, 5.0, 100),
            vec![RateK, ShiftK],
        ),
        "spectrum_xx" => {
            let mut source = pair(Xx, 0.0);
            if let EmitterSource::Pair(p) = &mut source {
                p.separation = 0.5;
            }
            base(
                name,
                source,
                sweep(SweepParameter::Omega, -40.0, 40.0, 1601, Spacing::Linear),
                vec![Spectrum],
            )
        }
        _ => return None,
    };
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse, to_json};

    #[test]
    fn every_listed_preset_builds_and_validates() {
        assert!(PRESETS.len() >= 10);
        for (name, _) in PRESETS {
            let s = preset(name).unwrap_or_else(|| panic!("{name}"));
            s.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.name.as_deref(), Some(name));
        }
    }

    #[test]
    fn required_names_present() {
        for name in ["fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig6b", "fig6c", "fig7"] {
            assert!(PRESETS.iter().any(|(n, _)| *n == name), "{name}");
        }
    }

    #[test]
    fn presets_round_trip() {
        for (name, _) in PRESETS {
            let s = preset(name).unwrap();
            assert_eq!(parse(&to_json(&s)).unwrap(), s, "{name}");
        }
    }

    #[test]
    fn unknown_preset() {
        assert!(preset("fig1").is_none());
    }
}
