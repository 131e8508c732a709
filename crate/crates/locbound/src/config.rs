use crate::channel::dbm_to_watts;
use crate::error::{Error, Result};
use crate::experiments::ParameterBundle;
use crate::scenario::{PlacementDistribution, Point2, Scenario, SensorNode};
use std::f64::consts::PI;

/// Runtime configuration: the fixed parameter bundle plus the Monte Carlo
/// scale. Every field has a default matching the reference evaluation
/// settings, so an empty config file is valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub bundle: ParameterBundle,
    pub placements: usize,
    pub noise_trials: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config { bundle: ParameterBundle::default(), placements: 100, noise_trials: 200 }
    }
}

/// Parses sectioned key=value text. Sections are `[channel]`, `[array]`,
/// `[placement]` and `[sweep]`; powers are given in dBm (`p_t_dbm`,
/// `p_m_dbm`) and angles in radians, with `pi`-fraction shorthand such as
/// `pi/3` accepted. Unknown sections or keys are rejected with the
/// offending line number.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut config = Config::default();
    let mut r = config.bundle.dist.r;
    let mut r0 = config.bundle.dist.r0;
    let mut theta_t = config.bundle.dist.theta_t;
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line_no, "unterminated section header"))?
                .trim();
            match name {
                "channel" | "array" | "placement" | "sweep" => {
                    section = Some(name.to_string());
                }
                other => {
                    return Err(parse_err(line_no, &format!("unknown section [{other}]")));
                }
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, "expected key = value"))?;
        let key = key.trim();
        let value = value.trim();
        let section = section
            .as_deref()
            .ok_or_else(|| parse_err(line_no, &format!("key {key:?} outside any section")))?;
        match (section, key) {
            ("channel", "p_t_dbm") => {
                config.bundle.ch.p_t = dbm_to_watts(number(value, line_no)?)
            }
            ("channel", "c0") => config.bundle.ch.c0 = number(value, line_no)?,
            ("channel", "gamma") => config.bundle.ch.gamma = number(value, line_no)?,
            ("channel", "sigma_s") => config.bundle.ch.sigma_s = number(value, line_no)?,
            ("channel", "x_c") => config.bundle.ch.x_c = number(value, line_no)?,
            ("array", "n_s") => config.bundle.arr.n_s = count(value, line_no)?,
            ("array", "n_a") => config.bundle.arr.n_a = count(value, line_no)?,
            ("array", "kappa") => config.bundle.arr.kappa = radians(value, line_no)?,
            ("array", "p_m_dbm") => {
                config.bundle.arr.p_m = dbm_to_watts(number(value, line_no)?)
            }
            ("placement", "r") => r = number(value, line_no)?,
            ("placement", "r0") => r0 = number(value, line_no)?,
            ("placement", "theta_t") => theta_t = radians(value, line_no)?,
            ("sweep", "n_sensors") => config.bundle.n_sensors = count(value, line_no)? as usize,
            ("sweep", "placements") => config.placements = count(value, line_no)? as usize,
            ("sweep", "noise_trials") => config.noise_trials = count(value, line_no)? as usize,
            (section, key) => {
                return Err(parse_err(
                    line_no,
                    &format!("unknown key {key:?} in section [{section}]"),
                ));
            }
        }
    }
    config.bundle.dist = PlacementDistribution::new(r, r0, theta_t)?;
    config.bundle.ch.validate()?;
    config.bundle.arr.validate()?;
    if config.bundle.n_sensors < 1 || config.placements < 1 || config.noise_trials < 1 {
        return Err(Error::InvalidParameter(
            "n_sensors, placements and noise_trials must be at least 1".into(),
        ));
    }
    Ok(config)
}

/// Parses a plain radian value or a `pi`-fraction shorthand: `pi`, `pi/3`,
/// `2pi/3`.
pub fn parse_radians(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    if let Some(pos) = t.find("pi") {
        let (num, rest) = t.split_at(pos);
        let rest = &rest[2..];
        let numerator: f64 = if num.is_empty() {
            1.0
        } else {
            num.parse().map_err(|_| format!("bad multiplier {num:?} in {t:?}"))?
        };
        let denominator: f64 = if rest.is_empty() {
            1.0
        } else if let Some(den) = rest.strip_prefix('/') {
            den.trim().parse().map_err(|_| format!("bad divisor {den:?} in {t:?}"))?
        } else {
            return Err(format!("unexpected trailing {rest:?} in {t:?}"));
        };
        if denominator == 0.0 {
            return Err(format!("division by zero in {t:?}"));
        }
        Ok(numerator * PI / denominator)
    } else {
        t.parse().map_err(|_| format!("not a number: {t:?}"))
    }
}

/// Parses scenario text: one `pu <x> <y>` line followed by one
/// `cr <x> <y> <orientation_rad>` line per sensor. Blank lines and `#`
/// comments (whole-line or trailing) are ignored.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut pu: Option<Point2> = None;
    let mut sensors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "pu" => {
                if pu.is_some() {
                    return Err(parse_err(line_no, "second pu line; only one allowed"));
                }
                if fields.len() != 3 {
                    return Err(parse_err(line_no, "expected: pu <x> <y>"));
                }
                pu = Some(Point2 {
                    x: number(fields[1], line_no)?,
                    y: number(fields[2], line_no)?,
                });
            }
            "cr" => {
                if pu.is_none() {
                    return Err(parse_err(line_no, "cr line before the pu line"));
                }
                if fields.len() != 4 {
                    return Err(parse_err(line_no, "expected: cr <x> <y> <orientation_rad>"));
                }
                sensors.push(SensorNode {
                    position: Point2 {
                        x: number(fields[1], line_no)?,
                        y: number(fields[2], line_no)?,
                    },
                    array_orientation: number(fields[3], line_no)?,
                });
            }
            other => {
                return Err(parse_err(
                    line_no,
                    &format!("unknown record {other:?}; expected pu or cr"),
                ));
            }
        }
    }
    let pu = pu.ok_or_else(|| parse_err(0, "no pu line found"))?;
    Scenario::new(pu, sensors)
}

/// Formats a scenario in the same text format `parse_scenario` reads.
/// Coordinates use the shortest representation that round-trips exactly.
pub fn format_scenario(scenario: &Scenario) -> String {
    let mut out = format!(
        "# transmitter and {} sensor nodes\npu {} {}\n",
        scenario.n(),
        scenario.pu.x,
        scenario.pu.y
    );
    for s in &scenario.sensors {
        out.push_str(&format!(
            "cr {} {} {}\n",
            s.position.x, s.position.y, s.array_orientation
        ));
    }
    out
}

// --- private helpers ---

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_string() }
}

fn number(value: &str, line: usize) -> Result<f64> {
    value
        .parse()
        .map_err(|_| parse_err(line, &format!("not a number: {value:?}")))
}

fn count(value: &str, line: usize) -> Result<u32> {
    value
        .parse()
        .map_err(|_| parse_err(line, &format!("not a positive integer: {value:?}")))
}

fn radians(value: &str, line: usize) -> Result<f64> {
    parse_radians(value).map_err(|msg| parse_err(line, &msg))
}
