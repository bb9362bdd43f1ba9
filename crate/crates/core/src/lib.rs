pub mod error;
pub mod grid;
pub mod interp;
pub mod specfun;
pub mod states;
pub mod transform;
pub mod propagators;
pub mod oracle;
pub mod phasespace;
pub mod tomography;
pub mod io;
pub mod verify;

// The guide's code listings run as doc tests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/units.md")]
    mod units {}
    #[doc = include_str!("../../../book/src/airy.md")]
    mod airy {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/propagation.md")]
    mod propagation {}
    #[doc = include_str!("../../../book/src/wigner.md")]
    mod wigner {}
    #[doc = include_str!("../../../book/src/tomography.md")]
    mod tomography {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
