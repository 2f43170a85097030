// Copyright 2026 The ccsketch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The Compressed Counting sketch.
//!
//! A sketch holds `x = R^T A` for a conceptual `D x k` matrix `R` of i.i.d.
//! `S(alpha, 1, 1)` entries, plus the exact running sum `F_(1)`. The matrix is
//! never stored: entry `r_ij` is regenerated from `(seed, i, j)` by a
//! counter-based ChaCha8 stream (stream `i`, words `4(j-1)..4j`), giving two
//! uniforms for the Chambers–Mallows–Stuck transform.
//!
//! Each coordinate accumulates the exact products `r_ij * I_t`, so the
//! coordinates read back are the correctly rounded values of the exact
//! linear map. Sketches built from the same multiset of updates in any
//! order, in shards merged afterwards, or in one batch are bit-identical.
//!
//! Estimates are only meaningful when the accumulated vector is entrywise
//! non-negative at estimation time. The sketch cannot check this.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::exact::ExactSum;
use crate::stable::{open_unit, SkewedStable};

/// Magic and format version at the head of a sketch snapshot.
pub const SNAPSHOT_MAGIC: [u8; 8] = *b"CCSK\x00\x00\x00\x01";

const HEADER_LEN: usize = 8 + 4 * 8 + 8;

/// One Turnstile update `A[index] += increment`; `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamUpdate {
    pub index: u64,
    pub increment: f64,
}

impl StreamUpdate {
    pub fn new(index: u64, increment: f64) -> Self {
        StreamUpdate { index, increment }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SketchConfig {
    alpha: f64,
    k: usize,
    seed: u64,
    domain_size: u64,
}

impl PartialEq for SketchConfig {
    fn eq(&self, other: &Self) -> bool {
        self.alpha.to_bits() == other.alpha.to_bits()
            && self.k == other.k
            && self.seed == other.seed
            && self.domain_size == other.domain_size
    }
}

impl Eq for SketchConfig {}

impl SketchConfig {
    pub fn new(alpha: f64, k: usize, seed: u64, domain_size: u64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
            return Err(Error::Config(format!(
                "alpha must lie in (0, 2) without 1, got {alpha}"
            )));
        }
        if k < 2 {
            return Err(Error::Config(format!(
                "k must be at least 2 (the estimators use Gamma(1 - 1/k)), got {k}"
            )));
        }
        if domain_size == 0 {
            return Err(Error::Config("domain size must be positive".into()));
        }
        Ok(SketchConfig {
            alpha,
            k,
            seed,
            domain_size,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn domain_size(&self) -> u64 {
        self.domain_size
    }
}

/// Regenerates rows of the projection matrix.
#[derive(Debug, Clone)]
pub struct Projector {
    base: ChaCha8Rng,
    dist: SkewedStable,
}

impl Projector {
    pub fn new(seed: u64, alpha: f64) -> Result<Self> {
        Ok(Projector {
            base: ChaCha8Rng::seed_from_u64(seed),
            dist: SkewedStable::new(alpha)?,
        })
    }

    /// Entry `r_ij` with 1-based `i` and `j`.
    pub fn entry(&self, i: u64, j: usize) -> f64 {
        let mut rng = self.base.clone();
        rng.set_stream(i);
        rng.set_word_pos(4 * (j as u128 - 1));
        self.draw(&mut rng)
    }

    /// Writes `r_i1 .. r_ik` into `row`.
    pub fn fill_row(&self, i: u64, row: &mut [f64]) {
        let mut rng = self.base.clone();
        rng.set_stream(i);
        rng.set_word_pos(0);
        for r in row.iter_mut() {
            *r = self.draw(&mut rng);
        }
    }

    #[inline]
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let u1 = open_unit(rng.next_u64());
        let u2 = open_unit(rng.next_u64());
        self.dist.from_uniforms(u1, u2)
    }
}

/// Entry `r_ij ~ S(alpha, 1, 1)` of the projection matrix for `seed`.
/// Repeated calls return identical bits.
pub fn projection_entry(seed: u64, i: u64, j: usize, alpha: f64) -> Result<f64> {
    if i == 0 || j == 0 {
        return Err(Error::domain("projection indices are 1-based"));
    }
    Ok(Projector::new(seed, alpha)?.entry(i, j))
}

#[derive(Debug, Clone)]
pub struct Sketch {
    config: SketchConfig,
    x: Vec<ExactSum>,
    f1: ExactSum,
    projector: Projector,
    row: Vec<f64>,
}

impl PartialEq for Sketch {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.f1().to_bits() == other.f1().to_bits()
            && self
                .x
                .iter()
                .zip(&other.x)
                .all(|(a, b)| a.value().to_bits() == b.value().to_bits())
    }
}

impl Sketch {
    /// An empty sketch: all coordinates zero, `f1 = 0`.
    pub fn new(config: SketchConfig) -> Result<Self> {
        Ok(Sketch {
            projector: Projector::new(config.seed, config.alpha)?,
            x: vec![ExactSum::new(); config.k],
            f1: ExactSum::new(),
            row: vec![0.0; config.k],
            config,
        })
    }

    /// The sketch that streaming every nonzero `a[i]` as one update, in
    /// ascending `i`, would produce.
    pub fn from_vector(config: SketchConfig, a: &[f64]) -> Result<Self> {
        if a.len() as u64 != config.domain_size {
            return Err(Error::Config(format!(
                "vector has length {} but the domain size is {}",
                a.len(),
                config.domain_size
            )));
        }
        let mut sketch = Sketch::new(config)?;
        for (i, &v) in a.iter().enumerate() {
            if v != 0.0 {
                sketch.update(StreamUpdate::new(i as u64 + 1, v))?;
            }
        }
        Ok(sketch)
    }

    /// Rebuilds a sketch from stored coordinates, as read from a snapshot.
    pub fn from_parts(config: SketchConfig, coordinates: &[f64], f1: f64) -> Result<Self> {
        if coordinates.len() != config.k {
            return Err(Error::Config(format!(
                "expected {} coordinates, got {}",
                config.k,
                coordinates.len()
            )));
        }
        let mut sketch = Sketch::new(config)?;
        for (acc, &v) in sketch.x.iter_mut().zip(coordinates) {
            *acc = ExactSum::from_value(v);
        }
        sketch.f1 = ExactSum::from_value(f1);
        Ok(sketch)
    }

    pub fn config(&self) -> &SketchConfig {
        &self.config
    }

    pub fn alpha(&self) -> f64 {
        self.config.alpha
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    /// The projected coordinates `x_1 .. x_k`.
    pub fn coordinates(&self) -> Vec<f64> {
        self.x.iter().map(ExactSum::value).collect()
    }

    /// Exact running sum of all increments, `F_(1)` for a non-negative vector.
    pub fn f1(&self) -> f64 {
        self.f1.value()
    }

    /// `x_j += r_{i j} I` for `j = 1..k` and `f1 += I`.
    pub fn update(&mut self, u: StreamUpdate) -> Result<()> {
        if u.index == 0 || u.index > self.config.domain_size {
            return Err(Error::Update(format!(
                "index {} outside [1, {}]",
                u.index, self.config.domain_size
            )));
        }
        if !u.increment.is_finite() {
            return Err(Error::Update(format!("non-finite increment {}", u.increment)));
        }
        if u.increment == 0.0 {
            return Ok(());
        }
        self.projector.fill_row(u.index, &mut self.row);
        if let Some(r) = self.row.iter().find(|r| !(*r * u.increment).is_finite()) {
            return Err(Error::Update(format!(
                "projection entry {r} times increment {} overflows",
                u.increment
            )));
        }
        for (acc, &r) in self.x.iter_mut().zip(&self.row) {
            acc.add_product(r, u.increment);
        }
        self.f1.add(u.increment);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = StreamUpdate>>(&mut self, updates: I) -> Result<()> {
        for u in updates {
            self.update(u)?;
        }
        Ok(())
    }

    /// Adds `other` into `self`; both must share the same config.
    pub fn merge_from(&mut self, other: &Sketch) -> Result<()> {
        if self.config != other.config {
            return Err(Error::Merge(format!(
                "config mismatch: {:?} vs {:?}",
                self.config, other.config
            )));
        }
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            a.merge(b);
        }
        self.f1.merge(&other.f1);
        Ok(())
    }

    /// Sketch of the concatenation of the two underlying streams.
    pub fn merge(a: &Sketch, b: &Sketch) -> Result<Sketch> {
        let mut out = a.clone();
        out.merge_from(b)?;
        Ok(out)
    }

    /// Snapshot bytes: magic/version, alpha, k, seed, D, f1, then the `k`
    /// coordinates, each eight bytes little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * self.config.k);
        out.extend_from_slice(&SNAPSHOT_MAGIC);
        out.extend_from_slice(&self.config.alpha.to_le_bytes());
        out.extend_from_slice(&(self.config.k as u64).to_le_bytes());
        out.extend_from_slice(&self.config.seed.to_le_bytes());
        out.extend_from_slice(&self.config.domain_size.to_le_bytes());
        out.extend_from_slice(&self.f1().to_le_bytes());
        for x in self.coordinates() {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Sketch> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Decode(format!(
                "snapshot truncated: {} bytes, header needs {HEADER_LEN}",
                bytes.len()
            )));
        }
        if bytes[..4] != SNAPSHOT_MAGIC[..4] {
            return Err(Error::Decode("bad magic: not a sketch snapshot".into()));
        }
        if bytes[4..8] != SNAPSHOT_MAGIC[4..8] {
            return Err(Error::Decode(format!(
                "unsupported snapshot version {:?}",
                &bytes[4..8]
            )));
        }
        let word = |n: usize| -> [u8; 8] { bytes[8 + 8 * n..16 + 8 * n].try_into().unwrap() };
        let alpha = f64::from_le_bytes(word(0));
        let k = u64::from_le_bytes(word(1));
        let seed = u64::from_le_bytes(word(2));
        let domain_size = u64::from_le_bytes(word(3));
        let f1 = f64::from_le_bytes(word(4));
        let expected = (k as u128) * 8 + HEADER_LEN as u128;
        if bytes.len() as u128 != expected {
            return Err(Error::Decode(format!(
                "snapshot length {} does not match k = {k} (expected {expected})",
                bytes.len()
            )));
        }
        let config = SketchConfig::new(alpha, k as usize, seed, domain_size)
            .map_err(|e| Error::Decode(e.to_string()))?;
        let coords: Vec<f64> = bytes[HEADER_LEN..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Sketch::from_parts(config, &coords, f1)
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Sketch> {
        Sketch::from_bytes(&fs::read(path)?)
    }
}
