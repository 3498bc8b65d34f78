//! Flat `key = value` run configuration with dotted keys.
//!
//! ```text
//! channel.L = 1.0
//! box.a = 0.8
//! box.b = 0.8
//! box.c = 0.8
//! obstacle.volume = 3.1
//! fluid.viscosity = 1.0
//! inflow.type = analytic      # or: sampled
//! inflow.amplitude = 1e-4
//! ```
//!
//! Blank lines and `#` comments are ignored. Relative `inflow.grid_file`
//! paths resolve against the directory of the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::ChannelGeometry;
use crate::inflow::DEFAULT_COMPAT_TOL;
use crate::report::InflowSource;
use crate::wellposedness::FluidParams;

const KEYS: &[&str] = &[
    "channel.L",
    "box.a",
    "box.b",
    "box.c",
    "obstacle.volume",
    "fluid.viscosity",
    "inflow.type",
    "inflow.amplitude",
    "inflow.grid_file",
    "inflow.compat_tol",
    "sweep.parameter",
    "sweep.lo",
    "sweep.hi",
    "sweep.steps",
    "output.path",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Amplitude,
    Viscosity,
    ObstacleVolume,
    BoxA,
}

impl SweepParam {
    pub fn key(self) -> &'static str {
        match self {
            Self::Amplitude => "amplitude",
            Self::Viscosity => "viscosity",
            Self::ObstacleVolume => "obstacle.volume",
            Self::BoxA => "box.a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl SweepConfig {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|k| if k == n { self.hi } else { self.lo + (self.hi - self.lo) * k as f64 / n as f64 })
            .collect()
    }
}

/// Raw parameters as written; the geometry is validated separately so that
/// sweeps can step through invalid values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    pub half_width: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub obstacle_volume: f64,
}

impl GeometryParams {
    pub fn build(&self) -> Result<ChannelGeometry> {
        ChannelGeometry::new(self.half_width, self.a, self.b, self.c, self.obstacle_volume)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub geometry: GeometryParams,
    pub viscosity: f64,
    pub inflow: InflowSource,
    pub compat_tol: f64,
    pub sweep: Option<SweepConfig>,
    pub output: Option<PathBuf>,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn err(line: usize, key: &str, message: impl Into<String>) -> Error {
        Error::Config {
            line,
            key: key.to_string(),
            message: message.into(),
        }
    }

    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn required(&self, key: &str) -> Result<(usize, &str)> {
        self.raw(key).ok_or_else(|| Self::err(0, key, "missing required key"))
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Some(x)),
                _ => Err(Self::err(line, key, format!("`{v}` is not a finite decimal number"))),
            },
        }
    }

    fn required_number(&self, key: &str) -> Result<f64> {
        self.required(key)?;
        Ok(self.number(key)?.expect("present"))
    }
}

impl RunConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            line: 0,
            key: String::new(),
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text, path.parent().unwrap_or_else(|| Path::new(".")))
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Entries::err(line, content, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Entries::err(line, key, "unknown key"));
            }
            if value.is_empty() {
                return Err(Entries::err(line, key, "empty value"));
            }
            if let Some((first, _)) = map.insert(key.to_string(), (line, value.to_string())) {
                return Err(Entries::err(line, key, format!("duplicate key, first set on line {first}")));
            }
        }
        let e = Entries { map };

        let geometry = GeometryParams {
            half_width: e.required_number("channel.L")?,
            a: e.required_number("box.a")?,
            b: e.required_number("box.b")?,
            c: e.required_number("box.c")?,
            obstacle_volume: e.required_number("obstacle.volume")?,
        };
        let viscosity = e.required_number("fluid.viscosity")?;
        let compat_tol = e.number("inflow.compat_tol")?.unwrap_or(DEFAULT_COMPAT_TOL);
        if compat_tol < 0.0 {
            let (line, _) = e.required("inflow.compat_tol")?;
            return Err(Entries::err(line, "inflow.compat_tol", "must be nonnegative"));
        }

        let (type_line, kind) = e.required("inflow.type")?;
        let inflow = match kind {
            "analytic" => {
                if let Some((line, _)) = e.raw("inflow.grid_file") {
                    return Err(Entries::err(line, "inflow.grid_file", "only valid with inflow.type = sampled"));
                }
                InflowSource::Analytic(e.required_number("inflow.amplitude")?)
            }
            "sampled" => {
                if let Some((line, _)) = e.raw("inflow.amplitude") {
                    return Err(Entries::err(line, "inflow.amplitude", "only valid with inflow.type = analytic"));
                }
                let (line, file) = e.required("inflow.grid_file")?;
                let path = base_dir.join(file);
                if !path.is_file() {
                    return Err(Entries::err(
                        line,
                        "inflow.grid_file",
                        format!("file {} does not exist", path.display()),
                    ));
                }
                InflowSource::Sampled { grid_file: path }
            }
            other => {
                return Err(Entries::err(
                    type_line,
                    "inflow.type",
                    format!("`{other}` is neither `analytic` nor `sampled`"),
                ))
            }
        };

        let sweep_keys = ["sweep.parameter", "sweep.lo", "sweep.hi", "sweep.steps"];
        let sweep = if sweep_keys.iter().any(|k| e.raw(k).is_some()) {
            let (pline, pname) = e.required("sweep.parameter")?;
            let param = match pname {
                "amplitude" => SweepParam::Amplitude,
                "viscosity" => SweepParam::Viscosity,
                "obstacle.volume" => SweepParam::ObstacleVolume,
                "box.a" => SweepParam::BoxA,
                other => {
                    return Err(Entries::err(
                        pline,
                        "sweep.parameter",
                        format!("`{other}` is not one of amplitude, viscosity, obstacle.volume, box.a"),
                    ))
                }
            };
            if param == SweepParam::Amplitude && !matches!(inflow, InflowSource::Analytic(_)) {
                return Err(Entries::err(pline, "sweep.parameter", "amplitude sweeps need inflow.type = analytic"));
            }
            let lo = e.required_number("sweep.lo")?;
            let hi = e.required_number("sweep.hi")?;
            if lo >= hi {
                let (line, _) = e.required("sweep.hi")?;
                return Err(Entries::err(line, "sweep.hi", format!("need lo < hi, got lo = {lo}, hi = {hi}")));
            }
            let (sline, s) = e.required("sweep.steps")?;
            let steps = s
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 2)
                .ok_or_else(|| Entries::err(sline, "sweep.steps", format!("`{s}` is not an integer >= 2")))?;
            Some(SweepConfig { param, lo, hi, steps })
        } else {
            None
        };

        let output = e.raw("output.path").map(|(_, p)| base_dir.join(p));
        Ok(Self {
            geometry,
            viscosity,
            inflow,
            compat_tol,
            sweep,
            output,
        })
    }

    pub fn geometry(&self) -> Result<ChannelGeometry> {
        self.geometry.build()
    }

    pub fn fluid(&self) -> Result<FluidParams> {
        FluidParams::new(self.viscosity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "channel.L = 1\nbox.a = 0.8\nbox.b = 0.8\nbox.c = 0.8\nobstacle.volume = 3.1\n\
                        fluid.viscosity = 1.0 # eta\ninflow.type = analytic\ninflow.amplitude = 0.001\n";

    fn parse(text: &str) -> Result<RunConfig> {
        RunConfig::parse(text, Path::new("."))
    }

    fn line_of(e: Error) -> (usize, String) {
        match e {
            Error::Config { line, key, .. } => (line, key),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_base() {
        let c = parse(BASE).unwrap();
        assert_eq!(c.inflow, InflowSource::Analytic(0.001));
        assert_eq!(c.compat_tol, DEFAULT_COMPAT_TOL);
        assert!(c.geometry().unwrap().conda());
        assert!(c.sweep.is_none());
    }

    #[test]
    fn diagnostics_name_line_and_key() {
        assert_eq!(line_of(parse(&format!("{BASE}bogus = 1\n")).unwrap_err()), (9, "bogus".into()));
        assert_eq!(line_of(parse(&BASE.replace("0.001", "abc")).unwrap_err()), (8, "inflow.amplitude".into()));
        assert_eq!(line_of(parse(&format!("{BASE}box.a = 1\n")).unwrap_err()), (9, "box.a".into()));
        assert_eq!(line_of(parse(&BASE.replace("box.b = 0.8\n", "")).unwrap_err()), (0, "box.b".into()));
        assert_eq!(line_of(parse(&format!("{BASE}just words\n")).unwrap_err()).0, 9);
        let sampled = BASE.replace("analytic\ninflow.amplitude = 0.001", "sampled\ninflow.grid_file = /nonexistent.csv");
        assert_eq!(line_of(parse(&sampled).unwrap_err()), (8, "inflow.grid_file".into()));
    }

    #[test]
    fn sweep_block() {
        let c = parse(&format!("{BASE}sweep.parameter = box.a\nsweep.lo = 0.5\nsweep.hi = 1.2\nsweep.steps = 8\n")).unwrap();
        let s = c.sweep.unwrap();
        assert_eq!(s.param, SweepParam::BoxA);
        let v = s.values();
        assert_eq!((v.len(), v[0], v[7]), (8, 0.5, 1.2));
        assert!(parse(&format!("{BASE}sweep.parameter = amplitude\nsweep.lo = 1\nsweep.hi = 1\nsweep.steps = 3\n")).is_err());
        assert!(parse(&format!("{BASE}sweep.parameter = amplitude\nsweep.lo = 0\nsweep.hi = 1\nsweep.steps = 1\n")).is_err());
        assert!(parse(&format!("{BASE}sweep.parameter = L\nsweep.lo = 0\nsweep.hi = 1\nsweep.steps = 3\n")).is_err());
    }
}
