//! Syndrome lookup-table decoding of Bell samples.

use crate::error::{Error, Result};
use crate::sampler::{check_parities, pauli_frame_update, BellSampleSet, SampleData};
use crate::states::stabilizer::{PauliString, StabilizerGroup};

/// Largest syndrome space (n−k bits) the table enumerates.
pub const SYNDROME_TABLE_CAP: usize = 20;

/// Minimum-weight correction table: one Pauli per syndrome, built
/// breadth-first over Pauli weight with ties broken by qubit index and
/// letter order X < Y < Z.
#[derive(Debug, Clone)]
pub struct LookupDecoder {
    code: StabilizerGroup,
    table: Vec<PauliString>,
}

fn syndrome_of(code: &StabilizerGroup, p: PauliString) -> u64 {
    code.generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.symplectic(p) == 1)
        .map(|(i, _)| 1u64 << i)
        .sum()
}

// letters in tie-break order
const LETTERS: [(u64, u64); 3] = [(1, 0), (1, 1), (0, 1)]; // X, Y, Z

pub fn build_lookup_decoder(code: &StabilizerGroup) -> Result<LookupDecoder> {
    let n = code.n();
    let r = n - code.k();
    if r > SYNDROME_TABLE_CAP {
        return Err(Error::resource(format!(
            "syndrome table capped at {SYNDROME_TABLE_CAP} checks, code has {r}"
        )));
    }
    let size = 1usize << r;
    let mut table: Vec<Option<PauliString>> = vec![None; size];
    table[0] = Some(PauliString::default());
    let mut filled = 1usize;

    let mut qubits: Vec<usize> = Vec::new();
    for weight in 1..=n {
        if filled == size {
            break;
        }
        // iterate weight-sized qubit subsets in lexicographic order
        qubits.clear();
        qubits.extend(0..weight);
        loop {
            let mut letters = vec![0usize; weight];
            loop {
                let mut p = PauliString::default();
                for (pos, &q) in qubits.iter().enumerate() {
                    let (x, z) = LETTERS[letters[pos]];
                    p.x |= x << q;
                    p.z |= z << q;
                }
                let s = syndrome_of(code, p) as usize;
                if table[s].is_none() {
                    table[s] = Some(p);
                    filled += 1;
                }
                // odometer over letters, most significant at the last qubit
                let mut pos = weight;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    letters[pos] += 1;
                    if letters[pos] < 3 {
                        break;
                    }
                    letters[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX {
                    break;
                }
            }
            // next combination
            let mut i = weight;
            loop {
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
                i -= 1;
                if qubits[i] < n - (weight - i) {
                    qubits[i] += 1;
                    for j in i + 1..weight {
                        qubits[j] = qubits[j - 1] + 1;
                    }
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    let table: Option<Vec<PauliString>> = table.into_iter().collect();
    let table = table.ok_or_else(|| {
        Error::Numeric("syndrome table has unreachable entries (generators dependent?)".into())
    })?;
    Ok(LookupDecoder {
        code: code.clone(),
        table,
    })
}

impl LookupDecoder {
    pub fn code(&self) -> &StabilizerGroup {
        &self.code
    }

    pub fn correction_for(&self, syndrome: u64) -> PauliString {
        self.table[syndrome as usize]
    }
}

/// Apply the decoded minimum-weight correction to every shot; afterwards all
/// parity checks pass.
pub fn correct(samples: &BellSampleSet, decoder: &LookupDecoder) -> Result<BellSampleSet> {
    let words = samples
        .shot_words()
        .ok_or_else(|| Error::contract("correction needs per-shot samples"))?;
    if decoder.code.n() != samples.n {
        return Err(Error::contract("decoder and samples disagree on n"));
    }
    let corrected: Result<Vec<u64>> = words
        .iter()
        .map(|&w| {
            let syndrome = check_parities(w, &decoder.code)?;
            Ok(pauli_frame_update(w, decoder.correction_for(syndrome)))
        })
        .collect();
    Ok(BellSampleSet {
        n: samples.n,
        shots: samples.shots,
        seed: samples.seed,
        provenance: format!("{} | corrected", samples.provenance),
        data: SampleData::PerShot(corrected?),
        retained_fraction: samples.retained_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_syndrome_is_identity() {
        let decoder = build_lookup_decoder(&StabilizerGroup::steane()).unwrap();
        assert!(decoder.correction_for(0).is_identity());
    }

    #[test]
    fn every_correction_matches_its_syndrome() {
        let code = StabilizerGroup::steane();
        let decoder = build_lookup_decoder(&code).unwrap();
        for s in 0..(1u64 << 6) {
            let c = decoder.correction_for(s);
            assert_eq!(syndrome_of(&code, c), s);
        }
    }

    #[test]
    fn single_z_errors_decoded_exactly() {
        // Distance-3 code: weight-1 errors have unique syndromes.
        let code = StabilizerGroup::steane();
        let decoder = build_lookup_decoder(&code).unwrap();
        for q in 0..7 {
            let err = PauliString { x: 0, z: 1 << q };
            let c = decoder.correction_for(syndrome_of(&code, err));
            assert_eq!(c, err);
        }
    }

    #[test]
    fn corrected_shots_have_zero_syndrome() {
        let code = StabilizerGroup::steane();
        let decoder = build_lookup_decoder(&code).unwrap();
        let words: Vec<u64> = (0..200u64)
            .map(|i| {
                let mut rng = crate::sampler::shot_rng(31, i);
                rand::Rng::random::<u64>(&mut rng) & ((1 << 14) - 1)
            })
            .collect();
        let set = BellSampleSet {
            n: 7,
            shots: words.len() as u64,
            seed: 31,
            provenance: "random words".into(),
            data: SampleData::PerShot(words),
            retained_fraction: None,
        };
        let fixed = correct(&set, &decoder).unwrap();
        for &w in fixed.shot_words().unwrap() {
            assert_eq!(check_parities(w, &code).unwrap(), 0);
        }
    }
}
