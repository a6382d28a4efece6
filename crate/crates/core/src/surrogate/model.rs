//! Trained surrogate: network plus the scalers it was trained under.
//!
//! File layout (text, one record per line, numbers in shortest round-trip
//! form so a saved model reloads bit-identical):
//!
//! ```text
//! draftopt-model 1
//! meta <key> <value>          (any number)
//! config <MlpConfig text>
//! activation <name>
//! layers <count>
//! layer <n_in> <n_out>        (per layer, then n_out `w` rows and one `b` row)
//! w <n_in weights>
//! b <n_out biases>
//! scaler x <m> / min ... / max ...
//! scaler y <2> / min ... / max ...
//! end
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::dataset::{DatasetScaler, MinMaxScaler};
use crate::error::{Error, Result};
use crate::evaluator::ObjectivePair;

use super::config::MlpConfig;
use super::network::{Layer, Mlp};

pub const MAGIC: &str = "draftopt-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateModel {
    pub net: Mlp,
    pub scaler: DatasetScaler,
    pub config: MlpConfig,
    pub meta: Vec<(String, String)>,
}

impl SurrogateModel {
    pub fn new(net: Mlp, scaler: DatasetScaler, config: MlpConfig) -> Result<Self> {
        if net.n_inputs() != scaler.x.dim() {
            return Err(Error::Shape { expected: scaler.x.dim(), got: net.n_inputs() });
        }
        if net.n_outputs() != 2 || scaler.y.dim() != 2 {
            return Err(Error::Shape { expected: 2, got: net.n_outputs() });
        }
        Ok(Self { net, scaler, config, meta: Vec::new() })
    }

    pub fn n_features(&self) -> usize {
        self.net.n_inputs()
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Prediction for unscaled offsets.
    pub fn predict(&self, x: &[f64]) -> Result<ObjectivePair> {
        let out = self.net.forward(&self.scaler.scale_x(x))?;
        let y = self.scaler.unscale_y(&out);
        Ok(ObjectivePair::new(y[0], y[1]))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{MAGIC} {FORMAT_VERSION}\n");
        for (k, v) in &self.meta {
            let _ = writeln!(s, "meta {k} {v}");
        }
        let _ = writeln!(s, "config {}", self.config);
        let _ = writeln!(s, "activation {}", self.net.activation());
        let _ = writeln!(s, "layers {}", self.net.layers().len());
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        for l in self.net.layers() {
            let _ = writeln!(s, "layer {} {}", l.n_in(), l.n_out());
            for row in l.weights().chunks(l.n_in()) {
                let _ = writeln!(s, "w {}", join(row));
            }
            let _ = writeln!(s, "b {}", join(l.bias()));
        }
        self.scaler.x.write_text("x", &mut s);
        self.scaler.y.write_text("y", &mut s);
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).peekable();
        let err = |line: usize, msg: String| Error::parse(origin, line, msg);
        let (ln, head) = lines.next().ok_or_else(|| err(1, "empty model file".into()))?;
        let mut hp = head.split_whitespace();
        if hp.next() != Some(MAGIC) {
            return Err(err(ln, format!("not a model file (expected '{MAGIC}')")));
        }
        let version: u32 = hp.next().and_then(|v| v.parse().ok()).ok_or_else(|| err(ln, "missing format version".into()))?;
        if version != FORMAT_VERSION {
            return Err(err(ln, format!("unsupported model format version {version}")));
        }

        let mut meta = Vec::new();
        while let Some((_, l)) = lines.peek() {
            let Some(rest) = l.strip_prefix("meta ") else { break };
            let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
            meta.push((k.to_string(), v.to_string()));
            lines.next();
        }
        let mut field = |tag: &str| -> Result<(usize, String)> {
            let (ln, l) = lines.next().ok_or_else(|| err(0, format!("missing '{tag}' record")))?;
            let rest = l
                .strip_prefix(tag)
                .and_then(|r| r.strip_prefix(' ').or(if r.is_empty() { Some("") } else { None }))
                .ok_or_else(|| err(ln, format!("expected '{tag}', found '{l}'")))?;
            Ok((ln, rest.to_string()))
        };
        let nums = |ln: usize, s: &str| -> Result<Vec<f64>> {
            s.split_whitespace()
                .map(|v| v.parse::<f64>().map_err(|_| err(ln, format!("invalid number '{v}'"))))
                .collect()
        };

        let (ln, cfg) = field("config")?;
        let config: MlpConfig = cfg.parse().map_err(|e: Error| err(ln, e.to_string()))?;
        let (ln, act) = field("activation")?;
        let activation = act.parse().map_err(|e: Error| err(ln, e.to_string()))?;
        let (ln, count) = field("layers")?;
        let count: usize = count.parse().map_err(|_| err(ln, "invalid layer count".into()))?;
        let mut layers = Vec::with_capacity(count);
        for _ in 0..count {
            let (ln, dims) = field("layer")?;
            let d: Vec<usize> = dims.split_whitespace().filter_map(|v| v.parse().ok()).collect();
            if d.len() != 2 {
                return Err(err(ln, "expected 'layer <n_in> <n_out>'".into()));
            }
            let mut weights = Vec::with_capacity(d[0] * d[1]);
            for _ in 0..d[1] {
                let (ln, row) = field("w")?;
                let row = nums(ln, &row)?;
                if row.len() != d[0] {
                    return Err(err(ln, format!("weight row has {} values, expected {}", row.len(), d[0])));
                }
                weights.extend(row);
            }
            let (ln, b) = field("b")?;
            let bias = nums(ln, &b)?;
            layers.push(Layer::new(d[0], d[1], weights, bias).map_err(|e| err(ln, e.to_string()))?);
        }
        let net = Mlp::from_layers(layers, activation).map_err(|e| err(0, e.to_string()))?;

        let mut rest = lines.map(|(_, l)| l);
        let x = MinMaxScaler::read_text("x", &mut rest).map_err(|m| err(0, m))?;
        let y = MinMaxScaler::read_text("y", &mut rest).map_err(|m| err(0, m))?;
        if rest.next() != Some("end") {
            return Err(err(0, "missing 'end' record (truncated file?)".into()));
        }
        let mut model = Self::new(net, DatasetScaler { x, y }, config).map_err(|e| err(0, e.to_string()))?;
        model.meta = meta;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}
