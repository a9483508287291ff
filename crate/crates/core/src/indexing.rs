//! Bit arithmetic for embedding sub-register operations into a full register.
//!
//! Qubit 0 is the most significant bit of a basis index. A target list
//! `[q0, q1, ..]` orders the sub-register the same way: `q0` is the most
//! significant bit of the sub-index.

use crate::error::{Error, Result};

pub(crate) struct TargetIndexer {
    sub_bits: usize,
    rest_bits: usize,
    sub_contrib: Vec<usize>,
    rest_contrib: Vec<usize>,
}

impl TargetIndexer {
    pub fn new(num_qubits: usize, targets: &[usize]) -> Result<Self> {
        let mut seen = vec![false; num_qubits];
        for &t in targets {
            if t >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: t,
                    num_qubits,
                });
            }
            if seen[t] {
                return Err(Error::DuplicateQubit(t));
            }
            seen[t] = true;
        }

        let sub_bits = targets.len();
        let rest_bits = num_qubits - sub_bits;
        let rest_qubits: Vec<usize> = (0..num_qubits).filter(|q| !seen[*q]).collect();

        let mut sub_contrib = vec![0usize; 1 << sub_bits];
        for (s, contrib) in sub_contrib.iter_mut().enumerate() {
            for (j, &q) in targets.iter().enumerate() {
                if (s >> (sub_bits - 1 - j)) & 1 == 1 {
                    *contrib |= 1 << (num_qubits - 1 - q);
                }
            }
        }
        let mut rest_contrib = vec![0usize; 1 << rest_bits];
        for (r, contrib) in rest_contrib.iter_mut().enumerate() {
            for (j, &q) in rest_qubits.iter().enumerate() {
                if (r >> (rest_bits - 1 - j)) & 1 == 1 {
                    *contrib |= 1 << (num_qubits - 1 - q);
                }
            }
        }

        Ok(Self {
            sub_bits,
            rest_bits,
            sub_contrib,
            rest_contrib,
        })
    }

    #[inline]
    pub fn full_index(&self, sub: usize, rest: usize) -> usize {
        self.sub_contrib[sub] | self.rest_contrib[rest]
    }

    pub fn sub_count(&self) -> usize {
        1 << self.sub_bits
    }

    pub fn rest_count(&self) -> usize {
        1 << self.rest_bits
    }
}
