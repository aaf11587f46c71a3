//! Two-copy Bell-sampling simulation.
//!
//! One shot prepares two copies of an n-qubit state on a 2n-qubit tableau,
//! applies the transversal CNOT readout of a Bell measurement, and records
//! one Bell symbol per qubit pair. Pauli noise can be inserted after every
//! gate and once per qubit before readout. Shots use counter-based RNG
//! streams derived from (seed, shot index), so results are bit-identical
//! regardless of how work is distributed over threads.

pub mod circuit;
pub mod decoder;
pub mod tableau;

use crate::error::{Error, Result};
pub use crate::noise::NoiseModel;
use crate::states::stabilizer::{PauliString, StabilizerGroup};
use crate::vector::{EnumeratorVector, VectorKind};
use circuit::{Circuit, Gate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tableau::Tableau;

/// Maximum number of qubit pairs per shot (the 2n-qubit tableau uses u64
/// row masks).
pub const MAX_PAIRS: usize = 32;

/// The four Bell measurement outcomes of one qubit pair.
///
/// The bit encoding is (x-bit, z-bit) = (X⊗X eigenvalue, Z⊗Z eigenvalue)
/// with +1 ↦ 0: Φ⁺ = 00, Ψ⁺ = 01, Φ⁻ = 10, Ψ⁻ = 11. The singlet Ψ⁻ is the
/// only symbol with both bits set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellSymbol {
    PhiPlus,
    PsiPlus,
    PhiMinus,
    PsiMinus,
}

impl BellSymbol {
    pub fn from_bits(x_bit: bool, z_bit: bool) -> Self {
        match (x_bit, z_bit) {
            (false, false) => BellSymbol::PhiPlus,
            (false, true) => BellSymbol::PsiPlus,
            (true, false) => BellSymbol::PhiMinus,
            (true, true) => BellSymbol::PsiMinus,
        }
    }

    pub fn code(self) -> u64 {
        match self {
            BellSymbol::PhiPlus => 0b00,
            BellSymbol::PsiPlus => 0b01,
            BellSymbol::PhiMinus => 0b10,
            BellSymbol::PsiMinus => 0b11,
        }
    }

    pub fn from_code(code: u64) -> Self {
        match code & 3 {
            0b00 => BellSymbol::PhiPlus,
            0b01 => BellSymbol::PsiPlus,
            0b10 => BellSymbol::PhiMinus,
            _ => BellSymbol::PsiMinus,
        }
    }

    pub fn is_singlet(self) -> bool {
        self == BellSymbol::PsiMinus
    }

    pub fn label(self) -> &'static str {
        match self {
            BellSymbol::PhiPlus => "Φ+",
            BellSymbol::PsiPlus => "Ψ+",
            BellSymbol::PhiMinus => "Φ-",
            BellSymbol::PsiMinus => "Ψ-",
        }
    }
}

/// One shot packed into a u64: pair s occupies bits 2s (z-bit) and 2s+1
/// (x-bit).
pub type ShotWord = u64;

const Z_BITS: u64 = 0x5555_5555_5555_5555;

pub fn symbol_at(word: ShotWord, pair: usize) -> BellSymbol {
    BellSymbol::from_code((word >> (2 * pair)) & 3)
}

pub fn singlet_count(word: ShotWord, n: usize) -> usize {
    let mask = if n == 32 { u64::MAX } else { (1u64 << (2 * n)) - 1 };
    let w = word & mask;
    ((w >> 1) & w & Z_BITS).count_ones() as usize
}

pub fn triplet_count(word: ShotWord, n: usize) -> usize {
    n - singlet_count(word, n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleData {
    /// One packed word per shot.
    PerShot(Vec<ShotWord>),
    /// `histogram[t]` counts shots with exactly t triplets.
    Histogram(Vec<u64>),
}

/// A collection of Bell-sampling outcomes with its generation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct BellSampleSet {
    pub n: usize,
    pub shots: u64,
    pub seed: u64,
    pub provenance: String,
    pub data: SampleData,
    /// Fraction of shots kept by parity-check postselection, when applied.
    pub retained_fraction: Option<f64>,
}

impl BellSampleSet {
    pub fn triplet_histogram(&self) -> Vec<u64> {
        match &self.data {
            SampleData::Histogram(h) => h.clone(),
            SampleData::PerShot(words) => {
                let mut h = vec![0u64; self.n + 1];
                for &w in words {
                    h[triplet_count(w, self.n)] += 1;
                }
                h
            }
        }
    }

    pub fn shot_words(&self) -> Option<&[ShotWord]> {
        match &self.data {
            SampleData::PerShot(w) => Some(w),
            SampleData::Histogram(_) => None,
        }
    }

    pub fn mean_triplets(&self) -> f64 {
        let h = self.triplet_histogram();
        let total: u64 = h.iter().sum();
        if total == 0 {
            return f64::NAN;
        }
        h.iter()
            .enumerate()
            .map(|(t, &c)| t as f64 * c as f64)
            .sum::<f64>()
            / total as f64
    }

    /// Empirical TPD (triplet frequencies).
    pub fn empirical_tpd(&self) -> Result<EnumeratorVector> {
        let h = self.triplet_histogram();
        let total: u64 = h.iter().sum();
        if total == 0 {
            return Err(Error::contract("empty sample set"));
        }
        EnumeratorVector::float(
            self.n,
            VectorKind::Tpd,
            h.iter().map(|&c| c as f64 / total as f64).collect(),
        )
    }

    fn validate(&self) -> Result<()> {
        match &self.data {
            SampleData::Histogram(h) => {
                if h.len() != self.n + 1 {
                    return Err(Error::contract("histogram length must be n+1"));
                }
                if h.iter().sum::<u64>() != self.shots {
                    return Err(Error::contract("histogram does not sum to the shot count"));
                }
            }
            SampleData::PerShot(w) => {
                if w.len() as u64 != self.shots {
                    return Err(Error::contract("per-shot data length mismatch"));
                }
            }
        }
        Ok(())
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent RNG stream for one shot, derived from (seed, shot index).
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut state = seed ^ shot.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(bytes)
}

fn random_pauli<R: Rng + ?Sized>(t: &mut Tableau, q: usize, rng: &mut R) {
    match rng.random_range(0..3u8) {
        0 => t.apply(Gate::X(q)),
        1 => t.apply(Gate::Y(q)),
        _ => t.apply(Gate::Z(q)),
    }
}

fn gate_noise<R: Rng + ?Sized>(t: &mut Tableau, gate: Gate, rate: f64, rng: &mut R) {
    if rate == 0.0 {
        return;
    }
    let (a, b) = gate.qubits();
    if rng.random_bool(rate) {
        random_pauli(t, a, rng);
    }
    if let Some(b) = b {
        if rng.random_bool(rate) {
            random_pauli(t, b, rng);
        }
    }
}

fn run_one_shot(
    prep_a: &Circuit,
    prep_b: &Circuit,
    noise: &NoiseModel,
    rng: &mut ChaCha8Rng,
) -> Result<ShotWord> {
    let n = prep_a.n;
    let mut t = Tableau::new(2 * n)?;
    for &g in &prep_a.gates {
        t.apply(g);
        gate_noise(&mut t, g, noise.circuit_error_rate, rng);
    }
    for &g in &prep_b.gates {
        let g = g.shifted(n);
        t.apply(g);
        gate_noise(&mut t, g, noise.circuit_error_rate, rng);
    }
    if noise.p > 0.0 {
        let pauli_prob = 0.75 * noise.p;
        for q in 0..2 * n {
            if rng.random_bool(pauli_prob) {
                random_pauli(&mut t, q, rng);
            }
        }
    }
    for s in 0..n {
        let g = Gate::Cnot(s, n + s);
        t.apply(g);
        gate_noise(&mut t, g, noise.circuit_error_rate, rng);
    }
    let mut word: ShotWord = 0;
    for s in 0..n {
        let x_bit = t.measure_x(s, rng);
        let z_bit = t.measure_z(n + s, rng);
        word |= ((z_bit as u64) | ((x_bit as u64) << 1)) << (2 * s);
    }
    Ok(word)
}

fn run_shots(
    prep_a: &Circuit,
    prep_b: &Circuit,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
    shot_offset: u64,
) -> Result<Vec<ShotWord>> {
    (0..shots)
        .into_par_iter()
        .map(|i| {
            let mut rng = shot_rng(seed, shot_offset + i);
            run_one_shot(prep_a, prep_b, noise, &mut rng)
        })
        .collect()
}

/// Simulate `shots` rounds of two-copy Bell sampling for a state prepared by
/// a Clifford circuit (the same circuit on both copies).
pub fn simulate_bell_circuit(
    prep: &Circuit,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<BellSampleSet> {
    noise.validate()?;
    prep.validate()?;
    if prep.n > MAX_PAIRS {
        return Err(Error::resource(format!(
            "bell sampling supports up to {MAX_PAIRS} pairs, requested {}",
            prep.n
        )));
    }
    let words = run_shots(prep, prep, noise, shots, seed, 0)?;
    Ok(BellSampleSet {
        n: prep.n,
        shots,
        seed,
        provenance: format!("circuit[{} gates]", prep.gates.len()),
        data: SampleData::PerShot(words),
        retained_fraction: None,
    })
}

/// Two-setting emulation of Bell sampling from the maximally mixed logical
/// state of a k=1 code: half the shots prepare |0,0⟩_L, the other half
/// prepare |0,1⟩_L by a transversal logical X on the second copy, and the
/// samples are pooled.
pub fn simulate_code_two_setting(
    encoder: &Circuit,
    logical_x: PauliString,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<BellSampleSet> {
    noise.validate()?;
    encoder.validate()?;
    if encoder.n > MAX_PAIRS {
        return Err(Error::resource(format!(
            "bell sampling supports up to {MAX_PAIRS} pairs, requested {}",
            encoder.n
        )));
    }
    let mut flipped = encoder.clone();
    for q in 0..encoder.n {
        let bit = 1u64 << q;
        match (logical_x.x & bit != 0, logical_x.z & bit != 0) {
            (false, false) => {}
            (true, false) => flipped.gates.push(Gate::X(q)),
            (true, true) => flipped.gates.push(Gate::Y(q)),
            (false, true) => flipped.gates.push(Gate::Z(q)),
        }
    }
    let first = shots - shots / 2;
    let mut words = run_shots(encoder, encoder, noise, first, seed, 0)?;
    words.extend(run_shots(encoder, &flipped, noise, shots / 2, seed, first)?);
    Ok(BellSampleSet {
        n: encoder.n,
        shots,
        seed,
        provenance: "two-setting logical bell sampling".into(),
        data: SampleData::PerShot(words),
        retained_fraction: None,
    })
}

/// One multinomial draw via conditional binomials.
pub fn multinomial<R: Rng + ?Sized>(rng: &mut R, trials: u64, probs: &[f64]) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = trials;
    let mut mass = 1.0f64;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i + 1 == probs.len() {
            counts[i] = remaining;
            break;
        }
        let cond = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let draw = Binomial::new(remaining, cond)
            .map_err(|e| Error::Numeric(format!("binomial draw failed: {e}")))?
            .sample(rng);
        counts[i] = draw;
        remaining -= draw;
        mass = (mass - p).max(0.0);
    }
    Ok(counts)
}

/// Multinomial sampling of triplet counts directly from an exact TPD.
pub fn sample_tpd(tpd: &EnumeratorVector, shots: u64, seed: u64) -> Result<BellSampleSet> {
    if tpd.kind != VectorKind::Tpd {
        return Err(Error::contract(format!(
            "sample_tpd needs a tpd vector, got {}",
            tpd.kind
        )));
    }
    let mut probs = tpd.to_f64();
    for p in &mut probs {
        if *p < -1e-9 {
            return Err(Error::contract(format!(
                "inadmissible TPD: entry {p} is negative beyond tolerance"
            )));
        }
        *p = p.max(0.0);
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::contract(format!(
            "TPD sums to {total}, expected 1 within 1e-9"
        )));
    }
    probs.iter_mut().for_each(|p| *p /= total);

    let mut rng = shot_rng(seed, u64::MAX);
    let hist = multinomial(&mut rng, shots, &probs)?;
    Ok(BellSampleSet {
        n: tpd.n,
        shots,
        seed,
        provenance: "multinomial from exact tpd".into(),
        data: SampleData::Histogram(hist),
        retained_fraction: None,
    })
}

/// Update one shot for a Pauli applied to one copy: X toggles the z-bit,
/// Z toggles the x-bit, Y toggles both.
pub fn pauli_frame_update(word: ShotWord, pauli: PauliString) -> ShotWord {
    let mut toggle = 0u64;
    for s in 0..32 {
        let bit = 1u64 << s;
        if pauli.x & bit != 0 {
            toggle |= 1 << (2 * s);
        }
        if pauli.z & bit != 0 {
            toggle |= 1 << (2 * s + 1);
        }
    }
    word ^ toggle
}

/// Syndrome of one shot against a stabilizer group: bit g is 0 iff the
/// outcome lies in the +1 eigenspace of S_g ⊗ S_g.
pub fn check_parities(word: ShotWord, code: &StabilizerGroup) -> Result<u64> {
    let n = code.n();
    if n > MAX_PAIRS {
        return Err(Error::resource("code exceeds the pair limit"));
    }
    // collapse the interleaved word into per-pair x/z bit masks
    let mut xb = 0u64;
    let mut zb = 0u64;
    for s in 0..n {
        zb |= ((word >> (2 * s)) & 1) << s;
        xb |= ((word >> (2 * s + 1)) & 1) << s;
    }
    let mut syndrome = 0u64;
    for (g, gen) in code.generators().iter().enumerate() {
        let x_pos = gen.x & !gen.z;
        let z_pos = gen.z & !gen.x;
        let y_pos = gen.x & gen.z;
        let parity = (x_pos & xb).count_ones()
            + (z_pos & zb).count_ones()
            + (y_pos & xb).count_ones()
            + (y_pos & zb).count_ones()
            + y_pos.count_ones();
        if parity % 2 == 1 {
            syndrome |= 1 << g;
        }
    }
    Ok(syndrome)
}

/// Keep only shots whose parity checks all pass; records the retained
/// fraction.
pub fn postselect(samples: &BellSampleSet, code: &StabilizerGroup) -> Result<BellSampleSet> {
    let words = samples
        .shot_words()
        .ok_or_else(|| Error::contract("postselection needs per-shot samples"))?;
    if code.n() != samples.n {
        return Err(Error::contract("code and samples disagree on n"));
    }
    let mut kept = Vec::new();
    for &w in words {
        if check_parities(w, code)? == 0 {
            kept.push(w);
        }
    }
    let retained = kept.len() as f64 / words.len().max(1) as f64;
    Ok(BellSampleSet {
        n: samples.n,
        shots: kept.len() as u64,
        seed: samples.seed,
        provenance: format!("{} | postselected", samples.provenance),
        data: SampleData::PerShot(kept),
        retained_fraction: Some(retained),
    })
}

const MAGIC: &[u8; 8] = b"QWEBELL1";

impl BellSampleSet {
    /// Compact binary format: header (n, shots, encoding, seed, provenance,
    /// retained fraction) followed by packed 2-bit symbols or the histogram.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        out.extend_from_slice(&self.shots.to_le_bytes());
        out.push(match self.data {
            SampleData::PerShot(_) => 0,
            SampleData::Histogram(_) => 1,
        });
        out.extend_from_slice(&self.seed.to_le_bytes());
        let prov = self.provenance.as_bytes();
        out.extend_from_slice(&(prov.len() as u32).to_le_bytes());
        out.extend_from_slice(prov);
        match self.retained_fraction {
            Some(f) => {
                out.push(1);
                out.extend_from_slice(&f.to_le_bytes());
            }
            None => out.push(0),
        }
        match &self.data {
            SampleData::PerShot(words) => {
                let bytes_per_shot = self.n.div_ceil(4);
                for &w in words {
                    for b in 0..bytes_per_shot {
                        out.push(((w >> (8 * b)) & 0xFF) as u8);
                    }
                }
            }
            SampleData::Histogram(h) => {
                for &c in h {
                    out.extend_from_slice(&c.to_le_bytes());
                }
            }
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0usize;
        let take = |pos: &mut usize, len: usize| -> Result<&[u8]> {
            if *pos + len > bytes.len() {
                return Err(Error::Parse("truncated sample file".into()));
            }
            let s = &bytes[*pos..*pos + len];
            *pos += len;
            Ok(s)
        };
        if take(&mut pos, 8)? != MAGIC {
            return Err(Error::Parse("not a bell sample file".into()));
        }
        let n = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
        let shots = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap());
        let encoding = take(&mut pos, 1)?[0];
        let seed = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap());
        let prov_len = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
        let provenance = String::from_utf8(take(&mut pos, prov_len)?.to_vec())
            .map_err(|_| Error::Parse("provenance is not UTF-8".into()))?;
        let retained = match take(&mut pos, 1)?[0] {
            0 => None,
            _ => Some(f64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap())),
        };
        if n == 0 || n > MAX_PAIRS {
            return Err(Error::Parse(format!("pair count {n} out of range")));
        }
        let data = match encoding {
            0 => {
                let bytes_per_shot = n.div_ceil(4);
                let mut words = Vec::with_capacity(shots as usize);
                for _ in 0..shots {
                    let chunk = take(&mut pos, bytes_per_shot)?;
                    let mut w = 0u64;
                    for (b, &byte) in chunk.iter().enumerate() {
                        w |= (byte as u64) << (8 * b);
                    }
                    words.push(w);
                }
                SampleData::PerShot(words)
            }
            1 => {
                let mut h = Vec::with_capacity(n + 1);
                for _ in 0..=n {
                    h.push(u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap()));
                }
                SampleData::Histogram(h)
            }
            other => return Err(Error::Parse(format!("unknown encoding byte {other}"))),
        };
        let set = BellSampleSet {
            n,
            shots,
            seed,
            provenance,
            data,
            retained_fraction: retained,
        };
        set.validate()?;
        Ok(set)
    }
}

#[derive(Serialize, Deserialize)]
struct SampleSetRepr {
    n: usize,
    shots: u64,
    seed: u64,
    provenance: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    retained_fraction: Option<f64>,
    encoding: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    symbols: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    histogram: Option<Vec<u64>>,
}

impl Serialize for BellSampleSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (encoding, symbols, histogram) = match &self.data {
            SampleData::PerShot(words) => {
                let strings = words
                    .iter()
                    .map(|&w| {
                        (0..self.n)
                            .map(|s| symbol_at(w, s).label())
                            .collect::<String>()
                    })
                    .collect();
                ("per_shot".to_string(), Some(strings), None)
            }
            SampleData::Histogram(h) => ("histogram".to_string(), None, Some(h.clone())),
        };
        SampleSetRepr {
            n: self.n,
            shots: self.shots,
            seed: self.seed,
            provenance: self.provenance.clone(),
            retained_fraction: self.retained_fraction,
            encoding,
            symbols,
            histogram,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BellSampleSet {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SampleSetRepr::deserialize(deserializer)?;
        let data = match repr.encoding.as_str() {
            "per_shot" => {
                let strings = repr
                    .symbols
                    .ok_or_else(|| D::Error::custom("per_shot data missing symbols"))?;
                let mut words = Vec::with_capacity(strings.len());
                for s in &strings {
                    let chars: Vec<char> = s.chars().collect();
                    if chars.len() != 2 * repr.n {
                        return Err(D::Error::custom(format!(
                            "shot string {s:?} has wrong length for n={}",
                            repr.n
                        )));
                    }
                    let mut w = 0u64;
                    for pair in 0..repr.n {
                        let sym = match (chars[2 * pair], chars[2 * pair + 1]) {
                            ('Φ', '+') => BellSymbol::PhiPlus,
                            ('Ψ', '+') => BellSymbol::PsiPlus,
                            ('Φ', '-') => BellSymbol::PhiMinus,
                            ('Ψ', '-') => BellSymbol::PsiMinus,
                            (a, b) => {
                                return Err(D::Error::custom(format!(
                                    "unknown bell symbol {a}{b}"
                                )))
                            }
                        };
                        w |= sym.code() << (2 * pair);
                    }
                    words.push(w);
                }
                SampleData::PerShot(words)
            }
            "histogram" => SampleData::Histogram(
                repr.histogram
                    .ok_or_else(|| D::Error::custom("histogram data missing"))?,
            ),
            other => return Err(D::Error::custom(format!("unknown encoding {other:?}"))),
        };
        let set = BellSampleSet {
            n: repr.n,
            shots: repr.shots,
            seed: repr.seed,
            provenance: repr.provenance,
            data,
            retained_fraction: repr.retained_fraction,
        };
        set.validate().map_err(D::Error::custom)?;
        Ok(set)
    }
}

/// Histogram CSV with columns (triplets, count).
pub fn histogram_csv(samples: &BellSampleSet) -> String {
    let mut s = String::from("triplets,count\n");
    for (t, c) in samples.triplet_histogram().iter().enumerate() {
        s.push_str(&format!("{t},{c}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::families::StateFamily;

    #[test]
    fn product_state_all_triplets_no_z_correlation() {
        // |0,0⟩ on a pair is (Φ⁺ + Φ⁻)/√2: all triplets, z-bit always 0,
        // x-bit an unbiased coin.
        let prep = StateFamily::ProductZero.preparation_circuit(3).unwrap();
        let set = simulate_bell_circuit(&prep, &NoiseModel::noiseless(), 2000, 1).unwrap();
        let mut phi_minus = 0u64;
        for &w in set.shot_words().unwrap() {
            for s in 0..3 {
                let sym = symbol_at(w, s);
                assert!(matches!(sym, BellSymbol::PhiPlus | BellSymbol::PhiMinus));
                if sym == BellSymbol::PhiMinus {
                    phi_minus += 1;
                }
            }
        }
        let f = phi_minus as f64 / 6000.0;
        assert!((f - 0.5).abs() < 0.03, "Φ⁻ frequency {f}");
    }

    #[test]
    fn bell_pair_symbols_match_across_pairs() {
        // Φ⁺⊗Φ⁺ sampling: both pairs always show the same symbol, uniformly
        // over the four symbols.
        let prep = StateFamily::BellPairs.preparation_circuit(2).unwrap();
        let set = simulate_bell_circuit(&prep, &NoiseModel::noiseless(), 4000, 2).unwrap();
        let mut counts = [0u64; 4];
        for &w in set.shot_words().unwrap() {
            let a = symbol_at(w, 0);
            let b = symbol_at(w, 1);
            assert_eq!(a, b);
            counts[a.code() as usize] += 1;
        }
        for c in counts {
            let f = c as f64 / 4000.0;
            assert!((f - 0.25).abs() < 0.03, "symbol frequency {f}");
        }
    }

    #[test]
    fn determinism_across_runs() {
        let prep = StateFamily::Ghz { entangled: 4 }.preparation_circuit(4).unwrap();
        let noise = NoiseModel {
            p: 0.05,
            circuit_error_rate: 0.01,
        };
        let a = simulate_bell_circuit(&prep, &noise, 500, 42).unwrap();
        let b = simulate_bell_circuit(&prep, &noise, 500, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate_bell_circuit(&prep, &noise, 500, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn frame_update_symbol_table() {
        let word = 0u64; // Φ⁺ everywhere
        let x0 = pauli_frame_update(word, PauliString { x: 1, z: 0 });
        assert_eq!(symbol_at(x0, 0), BellSymbol::PsiPlus);
        let psi_plus = x0;
        let z0 = pauli_frame_update(psi_plus, PauliString { x: 0, z: 1 });
        assert_eq!(symbol_at(z0, 0), BellSymbol::PsiMinus);
        let y0 = pauli_frame_update(word, PauliString { x: 1, z: 1 });
        assert_eq!(symbol_at(y0, 0), BellSymbol::PsiMinus);
        assert_eq!(pauli_frame_update(word, PauliString::default()), word);
    }

    #[test]
    fn steane_parities_on_clean_and_flipped_shots() {
        let code = StabilizerGroup::steane();
        let all_phi_plus = 0u64;
        assert_eq!(check_parities(all_phi_plus, &code).unwrap(), 0);
        // flip pair 0 to Ψ⁺: exactly the Z-type generators covering qubit 0 fire
        let flipped = pauli_frame_update(all_phi_plus, PauliString { x: 1, z: 0 });
        let syndrome = check_parities(flipped, &code).unwrap();
        let expected: u64 = code
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.z & 1 != 0)
            .map(|(i, _)| 1u64 << i)
            .sum();
        assert_eq!(syndrome, expected);
        assert_ne!(syndrome, 0);
    }

    #[test]
    fn empty_group_empty_syndrome() {
        let code = StabilizerGroup::new(3, vec![]).unwrap();
        assert_eq!(check_parities(0b101010, &code).unwrap(), 0);
    }

    #[test]
    fn syndrome_linearity_under_frame_updates() {
        let code = StabilizerGroup::steane();
        let mut rng = shot_rng(99, 0);
        for _ in 0..100 {
            let shot: u64 = rng.random::<u64>() & ((1 << 14) - 1);
            let err = PauliString {
                x: rng.random::<u64>() & 0x7F,
                z: rng.random::<u64>() & 0x7F,
            };
            let direct = check_parities(pauli_frame_update(shot, err), &code).unwrap();
            let base = check_parities(shot, &code).unwrap();
            let err_syndrome: u64 = code
                .generators()
                .iter()
                .enumerate()
                .filter(|(_, g)| g.symplectic(err) == 1)
                .map(|(i, _)| 1u64 << i)
                .sum();
            assert_eq!(direct, base ^ err_syndrome);
        }
    }

    #[test]
    fn sample_tpd_delta_and_stats() {
        let delta = EnumeratorVector::float(4, VectorKind::Tpd, vec![0.0, 0.0, 0.0, 0.0, 1.0])
            .unwrap();
        let set = sample_tpd(&delta, 1000, 5).unwrap();
        assert_eq!(set.triplet_histogram(), vec![0, 0, 0, 0, 1000]);

        let mixed = EnumeratorVector::float(
            2,
            VectorKind::Tpd,
            vec![1.0 / 16.0, 6.0 / 16.0, 9.0 / 16.0],
        )
        .unwrap();
        let shots = 1_000_000u64;
        let set = sample_tpd(&mixed, shots, 6).unwrap();
        let h = set.triplet_histogram();
        for (i, &p) in [1.0 / 16.0, 6.0 / 16.0, 9.0 / 16.0].iter().enumerate() {
            let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
            let dev = (h[i] as f64 - shots as f64 * p).abs();
            assert!(dev < 4.0 * sigma, "bin {i}: deviation {dev} vs sigma {sigma}");
        }
    }

    #[test]
    fn sample_tpd_rejects_negative() {
        let bad =
            EnumeratorVector::float(1, VectorKind::Tpd, vec![-0.1, 1.1]).unwrap();
        assert!(sample_tpd(&bad, 10, 0).is_err());
    }

    #[test]
    fn binary_and_json_round_trips() {
        let prep = StateFamily::BellPairs.preparation_circuit(4).unwrap();
        let set = simulate_bell_circuit(&prep, &NoiseModel::noiseless(), 50, 3).unwrap();
        let bin = set.to_binary();
        assert_eq!(BellSampleSet::from_binary(&bin).unwrap(), set);
        let json = serde_json::to_string(&set).unwrap();
        let back: BellSampleSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, set);

        let hist = sample_tpd(&set.empirical_tpd().unwrap(), 100, 9).unwrap();
        let bin = hist.to_binary();
        assert_eq!(BellSampleSet::from_binary(&bin).unwrap(), hist);
    }

    #[test]
    fn purity_sign_rule_even_singlets_for_pure_states() {
        // Noiseless pure-state runs only ever produce even singlet counts.
        for (family, n) in [
            (StateFamily::Ghz { entangled: 5 }, 5usize),
            (StateFamily::Ame6, 6),
            (StateFamily::LineGraph, 4),
        ] {
            let prep = family.preparation_circuit(n).unwrap();
            let set = simulate_bell_circuit(&prep, &NoiseModel::noiseless(), 2000, 8).unwrap();
            for &w in set.shot_words().unwrap() {
                assert_eq!(singlet_count(w, n) % 2, 0, "{family:?}");
            }
        }
    }
}
