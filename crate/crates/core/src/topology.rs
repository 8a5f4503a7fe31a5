//! Topology bit-strings and their compressibility.
//!
//! A snapshot of an undirected graph on `n` nodes is encoded as `n(n-1)/2`
//! bits in lexicographic pair order `(0,1), (0,2), ..., (n-2,n-1)`; a set bit
//! means the pair is linked. The inverse compression ratio
//! (`compressed / original`) of such strings is used as a proxy for how much
//! information the topology carries.

use std::fmt;
use std::io::{Read, Write};

use bzip2::read::BzDecoder;
use bzip2::write::BzEncoder;
use flate2::read::DeflateDecoder;
use flate2::write::DeflateEncoder;
use flate2::Compression;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TopologyBitString {
    n: usize,
    bits: Vec<bool>,
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl TopologyBitString {
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != pair_count(n) {
            return Err(invalid(
                "bits",
                format!(
                    "{} bits for {n} nodes, expected {}",
                    bits.len(),
                    pair_count(n)
                ),
            ));
        }
        Ok(Self { n, bits })
    }

    /// Builds the string from a predicate over pairs `i < j`.
    pub fn from_fn(n: usize, mut linked: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                bits.push(linked(i, j));
            }
        }
        Self { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Position of pair `{i, j}` in the bit order.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        assert!(
            j < self.n && i != j,
            "pair ({i}, {j}) invalid for n={}",
            self.n
        );
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn linked(&self, i: usize, j: usize) -> bool {
        self.bits[self.pair_index(i, j)]
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}

impl fmt::Display for TopologyBitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Concatenates snapshots in the given (tick) order without padding.
pub fn concat_snapshots(snapshots: &[TopologyBitString]) -> Result<Vec<bool>> {
    let Some(first) = snapshots.first() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(snapshots.len() * first.bits.len());
    for s in snapshots {
        if s.n != first.n {
            return Err(Error::MismatchedSnapshot {
                expected: first.n,
                found: s.n,
            });
        }
        out.extend_from_slice(&s.bits);
    }
    Ok(out)
}

/// Packs bits MSB-first; the final byte is zero-padded.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &b)| acc | ((b as u8) << (7 - k)))
        })
        .collect()
}

pub fn unpack_bits(bytes: &[u8], len: usize) -> Vec<bool> {
    (0..len)
        .map(|k| {
            bytes
                .get(k / 8)
                .is_some_and(|byte| byte >> (7 - k % 8) & 1 == 1)
        })
        .collect()
}

/// Lossless codecs available for scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Codec {
    /// Raw DEFLATE stream at maximum effort over the packed bytes.
    Deflate,
    /// bzip2 block-sorting compressor at maximum block size.
    Bzip2,
    /// First bit verbatim, then Elias-gamma coded run lengths.
    RunLength,
}

impl Codec {
    pub const ALL: [Codec; 3] = [Codec::Deflate, Codec::Bzip2, Codec::RunLength];

    pub fn name(self) -> &'static str {
        match self {
            Codec::Deflate => "deflate",
            Codec::Bzip2 => "bzip2",
            Codec::RunLength => "run-length",
        }
    }

    pub fn compress(self, bits: &[bool]) -> Result<Compressed> {
        match self {
            Codec::Deflate => {
                let mut enc = DeflateEncoder::new(Vec::new(), Compression::best());
                enc.write_all(&pack_bits(bits))
                    .map_err(|source| Error::Codec {
                        codec: self.name(),
                        source,
                    })?;
                let bytes = enc.finish().map_err(|source| Error::Codec {
                    codec: self.name(),
                    source,
                })?;
                Ok(Compressed {
                    bits: bytes.len() * 8,
                    bytes,
                })
            }
            Codec::Bzip2 => {
                let mut enc = BzEncoder::new(Vec::new(), bzip2::Compression::best());
                enc.write_all(&pack_bits(bits))
                    .map_err(|source| Error::Codec {
                        codec: self.name(),
                        source,
                    })?;
                let bytes = enc.finish().map_err(|source| Error::Codec {
                    codec: self.name(),
                    source,
                })?;
                Ok(Compressed {
                    bits: bytes.len() * 8,
                    bytes,
                })
            }
            Codec::RunLength => {
                let encoded = rle_encode(bits);
                Ok(Compressed {
                    bits: encoded.len(),
                    bytes: pack_bits(&encoded),
                })
            }
        }
    }

    /// Inverse of [`Codec::compress`]; `len` is the original bit count.
    pub fn decompress(self, data: &Compressed, len: usize) -> Result<Vec<bool>> {
        match self {
            Codec::Deflate | Codec::Bzip2 => {
                let mut bytes = Vec::new();
                let read = if self == Codec::Deflate {
                    DeflateDecoder::new(data.bytes.as_slice()).read_to_end(&mut bytes)
                } else {
                    BzDecoder::new(data.bytes.as_slice()).read_to_end(&mut bytes)
                };
                read.map_err(|source| Error::Codec {
                    codec: self.name(),
                    source,
                })?;
                if bytes.len() != len.div_ceil(8) {
                    return Err(corrupt(self, "inflated length mismatch"));
                }
                Ok(unpack_bits(&bytes, len))
            }
            Codec::RunLength => rle_decode(&unpack_bits(&data.bytes, data.bits), len)
                .ok_or_else(|| corrupt(self, "truncated run-length stream")),
        }
    }
}

fn corrupt(codec: Codec, msg: &str) -> Error {
    Error::Codec {
        codec: codec.name(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, msg.to_string()),
    }
}

fn push_gamma(out: &mut Vec<bool>, x: usize) {
    debug_assert!(x >= 1);
    let width = usize::BITS - x.leading_zeros();
    out.extend(std::iter::repeat_n(false, width as usize - 1));
    for k in (0..width).rev() {
        out.push(x >> k & 1 == 1);
    }
}

fn read_gamma(bits: &[bool], pos: &mut usize) -> Option<usize> {
    let mut zeros = 0;
    while !*bits.get(*pos)? {
        zeros += 1;
        *pos += 1;
    }
    let mut x = 0usize;
    for _ in 0..=zeros {
        x = x.checked_mul(2)? | *bits.get(*pos)? as usize;
        *pos += 1;
    }
    Some(x)
}

fn rle_encode(bits: &[bool]) -> Vec<bool> {
    let mut out = Vec::new();
    let Some(&first) = bits.first() else {
        return out;
    };
    out.push(first);
    let mut run = 0;
    let mut current = first;
    for &b in bits {
        if b == current {
            run += 1;
        } else {
            push_gamma(&mut out, run);
            current = b;
            run = 1;
        }
    }
    push_gamma(&mut out, run);
    out
}

fn rle_decode(encoded: &[bool], len: usize) -> Option<Vec<bool>> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return Some(out);
    }
    let mut current = *encoded.first()?;
    let mut pos = 1;
    while out.len() < len {
        let run = read_gamma(encoded, &mut pos)?;
        out.extend(std::iter::repeat_n(current, run));
        current = !current;
    }
    (out.len() == len).then_some(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compressed {
    pub bytes: Vec<u8>,
    /// Exact payload size in bits.
    pub bits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompressionScore {
    pub original_bits: usize,
    pub compressed_bits: usize,
    pub inverse_ratio: f64,
}

/// Compresses `bits`, checks the round trip, and scores the result.
pub fn inverse_compression_ratio(bits: &[bool], codec: Codec) -> Result<CompressionScore> {
    if bits.is_empty() {
        return Err(invalid("bits", "cannot score an empty bit sequence"));
    }
    let packed = codec.compress(bits)?;
    if codec.decompress(&packed, bits.len())? != bits {
        return Err(corrupt(codec, "round trip mismatch"));
    }
    Ok(CompressionScore {
        original_bits: bits.len(),
        compressed_bits: packed.bits,
        inverse_ratio: packed.bits as f64 / bits.len() as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompressionMode {
    /// All snapshots of a run concatenated and compressed together.
    #[default]
    WholeRun,
    /// Each snapshot compressed on its own; sizes summed.
    PerSnapshot,
}

pub fn score_run(
    snapshots: &[TopologyBitString],
    codec: Codec,
    mode: CompressionMode,
) -> Result<CompressionScore> {
    match mode {
        CompressionMode::WholeRun => {
            inverse_compression_ratio(&concat_snapshots(snapshots)?, codec)
        }
        CompressionMode::PerSnapshot => {
            let (mut original, mut compressed) = (0, 0);
            for s in snapshots {
                let score = inverse_compression_ratio(s.bits(), codec)?;
                original += score.original_bits;
                compressed += score.compressed_bits;
            }
            if original == 0 {
                return Err(invalid("snapshots", "no bits to score"));
            }
            Ok(CompressionScore {
                original_bits: original,
                compressed_bits: compressed,
                inverse_ratio: compressed as f64 / original as f64,
            })
        }
    }
}

/// Communication radii whose disk covers `coverage` of the field area,
/// `steps` equal increments from `min` to `max` inclusive.
pub fn coverage_radii(area: f64, min: f64, max: f64, steps: usize) -> Vec<f64> {
    let fractions: Vec<f64> = match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..steps)
            .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
            .collect(),
    };
    fractions
        .into_iter()
        .map(|f| (f * area / std::f64::consts::PI).sqrt())
        .collect()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn snap(s: &str) -> TopologyBitString {
        let n = (1..).find(|n| pair_count(*n) == s.len()).unwrap();
        TopologyBitString::new(n, bits(s)).unwrap()
    }

    #[test]
    fn pair_index_is_lexicographic() {
        let t = TopologyBitString::from_fn(5, |_, _| false);
        let mut k = 0;
        for i in 0..5 {
            for j in i + 1..5 {
                assert_eq!(t.pair_index(i, j), k);
                assert_eq!(t.pair_index(j, i), k);
                k += 1;
            }
        }
    }

    #[test]
    fn rejects_wrong_length() {
        assert!(TopologyBitString::new(4, bits("10")).is_err());
    }

    #[test]
    fn concat_cases() {
        let one = snap("101");
        assert_eq!(
            concat_snapshots(std::slice::from_ref(&one)).unwrap(),
            bits("101")
        );
        assert_eq!(
            concat_snapshots(&[snap("111"), snap("000")]).unwrap(),
            bits("111000")
        );
        let many = vec![snap("110100"); 7];
        assert_eq!(concat_snapshots(&many).unwrap().len(), 7 * 6);
        assert!(matches!(
            concat_snapshots(&[snap("111"), snap("110100")]),
            Err(Error::MismatchedSnapshot {
                expected: 3,
                found: 4
            })
        ));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(inverse_compression_ratio(&[], Codec::Deflate).is_err());
    }

    #[test]
    fn all_zero_string_compresses_hard() {
        let zeros = vec![false; 10_000];
        let deflate = inverse_compression_ratio(&zeros, Codec::Deflate).unwrap();
        let golden: serde_json::Value =
            serde_json::from_str(include_str!("../tests/golden/deflate_zeros_10000.json")).unwrap();
        assert_eq!(
            deflate.compressed_bits as u64,
            golden["compressed_bits"].as_u64().unwrap()
        );
        assert!(deflate.inverse_ratio < 0.05);
        let rle = inverse_compression_ratio(&zeros, Codec::RunLength).unwrap();
        // one literal bit + gamma(10000) = 1 + 27
        assert_eq!(rle.compressed_bits, 28);
    }

    #[test]
    fn random_bits_are_incompressible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data: Vec<bool> = (0..1_000_000).map(|_| rng.random()).collect();
        let score = inverse_compression_ratio(&data, Codec::Deflate).unwrap();
        assert!(score.inverse_ratio >= 0.95, "{}", score.inverse_ratio);
    }

    #[test]
    fn complement_scores_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // bursty input with long runs
        let mut data = Vec::new();
        while data.len() < 20_000 {
            let b: bool = rng.random();
            let run = rng.random_range(1..200);
            data.extend(std::iter::repeat_n(b, run));
        }
        let flipped: Vec<bool> = data.iter().map(|b| !b).collect();
        for codec in Codec::ALL {
            let a = inverse_compression_ratio(&data, codec)
                .unwrap()
                .inverse_ratio;
            let b = inverse_compression_ratio(&flipped, codec)
                .unwrap()
                .inverse_ratio;
            assert!((a - b).abs() / a <= 0.02, "{codec:?}: {a} vs {b}");
        }
    }

    #[test]
    fn gamma_codes() {
        let mut out = Vec::new();
        push_gamma(&mut out, 1);
        push_gamma(&mut out, 4);
        assert_eq!(out, bits("100100"));
        let mut pos = 0;
        assert_eq!(read_gamma(&out, &mut pos), Some(1));
        assert_eq!(read_gamma(&out, &mut pos), Some(4));
        assert_eq!(read_gamma(&out, &mut pos), None);
    }

    #[test]
    fn per_snapshot_mode_sums_sizes() {
        let snaps = vec![snap("111"), snap("000")];
        let score = score_run(&snaps, Codec::RunLength, CompressionMode::PerSnapshot).unwrap();
        assert_eq!(score.original_bits, 6);
        // each: 1 literal + gamma(3) = 1 + 3
        assert_eq!(score.compressed_bits, 8);
    }

    #[test]
    fn coverage_radii_hit_both_ends() {
        let area = 100.0 * 100.0;
        let r = coverage_radii(area, 0.34, 0.75, 13);
        assert_eq!(r.len(), 13);
        let cover = |r: f64| std::f64::consts::PI * r * r / area;
        assert!((cover(r[0]) - 0.34).abs() < 1e-12);
        assert!((cover(r[12]) - 0.75).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn round_trip_is_lossless(data in prop::collection::vec(any::<bool>(), 1..2000)) {
            for codec in Codec::ALL {
                let packed = codec.compress(&data).unwrap();
                prop_assert_eq!(codec.decompress(&packed, data.len()).unwrap(), data.clone());
            }
        }
    }
}
