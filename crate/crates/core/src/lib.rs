pub mod cpabe;
pub mod envelope;
pub mod error;
pub mod kpabe;
pub mod pairing;
pub mod policy;
pub mod testing;
