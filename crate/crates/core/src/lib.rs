//! Global dimension of incidence algebras of posets and of rational
//! incomplete Mackey functors over finite abelian groups.

pub mod crosscheck;
pub mod groups;
pub mod izext;
pub mod mackeydim;
pub mod oracle;
pub mod posets;
pub mod qlinalg;
pub mod transfer;
