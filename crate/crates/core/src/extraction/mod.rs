//! Structural features pulled from a parsed snippet: import aliases, call
//! sites with argument literals, and per-scope name tables.

mod calls;
mod imports;
mod scopes;

pub use calls::{
    extract_call_sites, file_extension, ArgFeature, ArgSlot, CallSite, CalleeKind, LiteralKind, Receiver,
    StatementContext,
};
pub use imports::{extract_imports, AliasEntry, AliasKind, AliasMap};
pub use scopes::{extract_scopes, AssignedValue, DefKind, Definition, NameUse, Scope, ScopeId, ScopeTable};

/// Everything the validator needs from one module.
#[derive(Debug, Clone)]
pub struct Features {
    pub aliases: AliasMap,
    pub call_sites: Vec<CallSite>,
    pub scopes: ScopeTable,
}

pub fn extract(module: &crate::syntax::Module) -> Features {
    let aliases = extract_imports(module);
    let call_sites = extract_call_sites(module, &aliases);
    let scopes = extract_scopes(module);
    Features { aliases, call_sites, scopes }
}
