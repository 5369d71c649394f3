//! Integer partitions, formal alphabets and the translation from power sums
//! `𝔭_k` to elementary symmetric functions `𝔢_k`, plus zeta-type constants.

mod alphabet;
mod builtin;
mod partitions;
mod zeta;

pub use alphabet::{
    alphabet_epsilon, alphabet_sum, elementary_from_powers, elementary_sequence, FormalAlphabet,
};
pub use builtin::{
    odd_zeta_alphabet, power_law_alphabet, prime_zeta_alphabet, theta_alphabet, zeta_alphabet,
};
pub use partitions::{partitions, z_of_partition, IntegerPartition, MAX_PARTITION_SIZE};
pub use zeta::{
    euler_phi, hurwitz_zeta, mobius, power_sum_partial, prime_zeta_value, zeta_minus_one,
    zeta_value,
};
