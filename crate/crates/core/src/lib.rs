pub mod cli;
pub mod cm;
pub mod derived;
pub mod linalg;
pub mod monomial;
pub mod poset;
pub mod projective;
pub mod sheaf;
pub mod sr;
