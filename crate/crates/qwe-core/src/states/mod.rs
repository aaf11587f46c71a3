//! State representations and the enumerator oracles computed from them.

pub mod dense;
pub mod families;
pub mod stabilizer;

pub use dense::{
    apd_from_dense, dense_from_circuit, depolarize_dense, partial_trace, sld_from_dense,
    spin_flip, statevector_from_circuit, tpd_from_dense, DenseState, DENSE_QUBIT_CAP,
};
pub use families::{
    build_family_state, dicke_dense, family_all_enumerators, family_enumerators, sld_tensor,
    FamilyState, StateFamily,
};
pub use stabilizer::{code_enumerators, CodeEnumerators, PauliString, StabilizerGroup};
