//! Nucleotide encoding, read-window databases and qubit register sizing.
//!
//! Each base takes two bits (`A=00`, `T=01`, `G=10`, `C=11`). A window of
//! `M` bases is the concatenation of its base codes with the first base in
//! the most significant position, so a window occupies `2M` data qubits and
//! data qubit `b` holds bit `b` of that integer.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    A,
    T,
    G,
    C,
}

impl Base {
    pub const ALL: [Base; 4] = [Base::A, Base::T, Base::G, Base::C];

    pub fn code(self) -> u8 {
        match self {
            Base::A => 0b00,
            Base::T => 0b01,
            Base::G => 0b10,
            Base::C => 0b11,
        }
    }

    pub fn from_code(code: u8) -> Option<Base> {
        match code {
            0b00 => Some(Base::A),
            0b01 => Some(Base::T),
            0b10 => Some(Base::G),
            0b11 => Some(Base::C),
            _ => None,
        }
    }

    pub fn from_char(c: char) -> Option<Base> {
        match c.to_ascii_uppercase() {
            'A' => Some(Base::A),
            'T' => Some(Base::T),
            'G' => Some(Base::G),
            'C' => Some(Base::C),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::T => 'T',
            Base::G => 'G',
            Base::C => 'C',
        }
    }
}

/// The two-character code of a base, e.g. `"01"` for T.
pub fn encode_base(b: Base) -> &'static str {
    match b {
        Base::A => "00",
        Base::T => "01",
        Base::G => "10",
        Base::C => "11",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequence(Vec<Base>);

impl Sequence {
    pub fn new(bases: Vec<Base>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::argument("sequence must contain at least one base"));
        }
        Ok(Sequence(bases))
    }

    pub fn bases(&self) -> &[Base] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::str::FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_sequence(s)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

/// Parses plain or FASTA-style text. Lines starting with `>` are headers and
/// are skipped along with all whitespace; A/T/G/C are accepted in either
/// case. Anything else (including IUPAC ambiguity codes) is rejected with
/// its 1-based character position in `text`.
pub fn parse_sequence(text: &str) -> Result<Sequence> {
    let mut bases = Vec::new();
    let mut position = 0usize;
    for line in text.split_inclusive('\n') {
        let header = line.starts_with('>');
        for ch in line.chars() {
            position += 1;
            if header || ch.is_whitespace() {
                continue;
            }
            match Base::from_char(ch) {
                Some(b) => bases.push(b),
                None => {
                    return Err(Error::Parse {
                        position,
                        message: format!("unexpected character {ch:?}"),
                    })
                }
            }
        }
    }
    if bases.is_empty() {
        return Err(Error::Parse { position, message: "no bases found".into() });
    }
    Ok(Sequence(bases))
}

/// Symbol alphabet for register sizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alphabet {
    Dna,
    /// 20 residues need 5 bits since 2^4 < 20 < 2^5. Sizing only.
    AminoAcid,
}

impl Alphabet {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Alphabet::Dna => 2,
            Alphabet::AminoAcid => 5,
        }
    }
}

/// Qubit allocation for the index/data encoding. Data qubits come first
/// (`0..data_qubits`), then the optional padding flag, then the index
/// register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub index_qubits: usize,
    pub data_qubits: usize,
    pub padding_flag: bool,
    pub total: usize,
}

impl RegisterLayout {
    /// Layout for a genome of `genome_len` symbols searched with windows of
    /// `window_len` symbols.
    pub fn for_sizes(genome_len: u64, window_len: u64, alphabet: Alphabet) -> Result<Self> {
        if window_len == 0 || window_len > genome_len {
            return Err(Error::argument(format!(
                "window length {window_len} must lie in 1..={genome_len}"
            )));
        }
        let windows = genome_len - window_len + 1;
        let padded = windows.next_power_of_two();
        let index_qubits = padded.trailing_zeros() as usize;
        let data_qubits = alphabet.bits_per_symbol() * window_len as usize;
        let padding_flag = padded != windows;
        Ok(RegisterLayout {
            index_qubits,
            data_qubits,
            padding_flag,
            total: index_qubits + data_qubits + usize::from(padding_flag),
        })
    }

    pub fn data_qubit(&self, bit: usize) -> usize {
        debug_assert!(bit < self.data_qubits);
        bit
    }

    pub fn flag_qubit(&self) -> Option<usize> {
        self.padding_flag.then_some(self.data_qubits)
    }

    pub fn index_qubit(&self, bit: usize) -> usize {
        debug_assert!(bit < self.index_qubits);
        self.data_qubits + usize::from(self.padding_flag) + bit
    }

    pub fn data_mask(&self) -> usize {
        (1usize << self.data_qubits) - 1
    }

    /// Splits a basis index into `(index, data, flag)`.
    pub fn decode(&self, basis: usize) -> (usize, usize, bool) {
        let data = basis & self.data_mask();
        let flag = self.padding_flag && (basis >> self.data_qubits) & 1 == 1;
        let index = basis >> (self.data_qubits + usize::from(self.padding_flag));
        (index, data, flag)
    }

    pub fn encode(&self, index: usize, data: usize, flag: bool) -> usize {
        let mut basis = data | index << (self.data_qubits + usize::from(self.padding_flag));
        if flag && self.padding_flag {
            basis |= 1 << self.data_qubits;
        }
        basis
    }
}

/// Integer value of the `2M`-bit encoding of `window`, first base most
/// significant.
pub fn encode_window(window: &[Base]) -> u128 {
    window.iter().fold(0u128, |acc, b| acc << 2 | u128::from(b.code()))
}

/// Bitstring of the `2M`-bit encoding, most significant bit first.
pub fn encode_window_bits(window: &[Base]) -> String {
    window.iter().map(|&b| encode_base(b)).collect()
}

pub fn decode_window(value: u128, window_len: usize) -> Vec<Base> {
    (0..window_len)
        .rev()
        .map(|k| Base::from_code(((value >> (2 * k)) & 0b11) as u8).expect("2-bit code"))
        .collect()
}

/// All length-`M` windows of a genome, indexed in genome order and padded
/// up to a power-of-two index range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadWindowDatabase {
    genome: Sequence,
    window_length: usize,
    num_windows: usize,
    padded_size: usize,
}

/// Largest window whose encoding fits the `u128` data word.
pub const MAX_WINDOW_LENGTH: usize = 64;

impl ReadWindowDatabase {
    pub fn new(genome: Sequence, window_length: usize) -> Result<Self> {
        let n = genome.len();
        if window_length == 0 || window_length > n {
            return Err(Error::argument(format!(
                "window length {window_length} must lie in 1..={n}"
            )));
        }
        if window_length > MAX_WINDOW_LENGTH {
            return Err(Error::Capacity {
                what: "window length".into(),
                required: window_length,
                limit: MAX_WINDOW_LENGTH,
            });
        }
        let num_windows = n - window_length + 1;
        Ok(ReadWindowDatabase {
            genome,
            window_length,
            num_windows,
            padded_size: num_windows.next_power_of_two(),
        })
    }

    pub fn genome(&self) -> &Sequence {
        &self.genome
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    /// Genuine entries, `N − M + 1`.
    pub fn num_windows(&self) -> usize {
        self.num_windows
    }

    pub fn padded_size(&self) -> usize {
        self.padded_size
    }

    pub fn has_padding(&self) -> bool {
        self.padded_size != self.num_windows
    }

    pub fn window(&self, index: usize) -> &[Base] {
        &self.genome.bases()[index..index + self.window_length]
    }

    pub fn windows(&self) -> impl Iterator<Item = (usize, &[Base])> {
        (0..self.num_windows).map(move |i| (i, self.window(i)))
    }

    /// Encoded data stored at register index `index`. Padding indices reuse
    /// window 0 and are told apart by the flag qubit.
    pub fn data_word(&self, index: usize) -> u128 {
        if index < self.num_windows {
            encode_window(self.window(index))
        } else {
            encode_window(self.window(0))
        }
    }

    pub fn layout(&self) -> RegisterLayout {
        register_layout(self)
    }

    /// Writes `index,window_string,encoded_bits` rows for genuine windows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "index,window_string,encoded_bits")?;
        for (i, w) in self.windows() {
            let s: String = w.iter().map(|b| b.as_char()).collect();
            writeln!(out, "{i},{s},{}", encode_window_bits(w))?;
        }
        Ok(())
    }
}

pub fn build_window_db(genome: Sequence, window_length: usize) -> Result<ReadWindowDatabase> {
    ReadWindowDatabase::new(genome, window_length)
}

pub fn register_layout(db: &ReadWindowDatabase) -> RegisterLayout {
    let index_qubits = db.padded_size.trailing_zeros() as usize;
    let data_qubits = 2 * db.window_length;
    let padding_flag = db.has_padding();
    RegisterLayout {
        index_qubits,
        data_qubits,
        padding_flag,
        total: index_qubits + data_qubits + usize::from(padding_flag),
    }
}
