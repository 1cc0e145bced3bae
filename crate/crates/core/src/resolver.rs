//! Expression analysis and relation resolution: multi-round type
//! inference over function bodies, extension-function location, Java to
//! Kotlin accessor bridging, and collection of all thirteen relation
//! kinds.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::ir::{Body, Expr, Lambda, LitTy, Stmt};
use crate::model::{
    Diagnostic, EntityId, EntityKind, EntityTree, ModelError, RelationKind, RelationStore, UseSite,
};

#[derive(Debug, Clone)]
pub struct InferenceConfig {
    pub max_rounds: usize,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        InferenceConfig { max_rounds: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PendingKind {
    Call,
    Create,
    Cast,
    Use,
}

impl PendingKind {
    fn relation(self) -> RelationKind {
        match self {
            PendingKind::Call => RelationKind::Call,
            PendingKind::Create => RelationKind::Create,
            PendingKind::Cast => RelationKind::Cast,
            PendingKind::Use => RelationKind::Use,
        }
    }
}

/// A relation occurrence discovered while analyzing expressions;
/// recorded into the store by [`collect_relations`].
#[derive(Debug, Clone)]
pub struct Pending {
    pub owner: EntityId,
    pub target: EntityId,
    pub kind: PendingKind,
    pub path: String,
    pub line: u32,
}

/// Inference state accumulated across rounds. All maps only grow and
/// entries are never overwritten with a different id.
#[derive(Debug, Default)]
pub struct Inference {
    pub rounds_used: usize,
    pub expr_types: Vec<Option<EntityId>>,
    pub bindings: BTreeMap<u32, Pending>,
    pub var_types: HashMap<EntityId, EntityId>,
    pub fn_returns: HashMap<EntityId, EntityId>,
    pub lambda_receivers: HashMap<u32, EntityId>,
    typed_exprs: usize,
}

impl Inference {
    fn score(&self) -> usize {
        self.typed_exprs
            + self.var_types.len()
            + self.fn_returns.len()
            + self.lambda_receivers.len()
            + self.bindings.len()
    }

    fn set_expr_type(&mut self, eid: u32, ty: EntityId) {
        let idx = eid as usize;
        if self.expr_types.len() <= idx {
            self.expr_types.resize(idx + 1, None);
        }
        match self.expr_types[idx] {
            None => {
                self.expr_types[idx] = Some(ty);
                self.typed_exprs += 1;
            }
            Some(existing) => {
                debug_assert_eq!(existing, ty, "expression type changed across rounds")
            }
        }
    }

    /// Number of expressions with a known type.
    pub fn typed_expr_count(&self) -> usize {
        self.typed_exprs
    }
}

/// Resolves every raw TypeRef attached to entities (supertypes, returns,
/// parameters, receivers, delegation targets), plus import directives,
/// annotation uses, and function-type parameter shapes. Returns the
/// count of refs resolved; unresolved refs remain absent.
pub fn resolve_type_refs(tree: &mut EntityTree) -> usize {
    let mut resolved = 0;

    // Imports first: scope lookups consult them.
    for file in tree.files() {
        let mut hits = Vec::new();
        for (index, import) in tree.imports(file).iter().enumerate() {
            if import.wildcard || import.resolved.is_some() {
                continue;
            }
            if let Some(target) = tree.by_qualified_name(&import.raw_path) {
                if tree.entity(target).kind != EntityKind::Package {
                    hits.push((index, target));
                }
            }
        }
        if let Some(imports) = tree.imports_mut(file) {
            for (index, target) in hits {
                imports[index].resolved = Some(target);
                resolved += 1;
            }
        }
    }

    // Entity-attached refs, resolved in the entity's own scope.
    for id in tree.ids().collect::<Vec<_>>() {
        let entity = tree.entity(id);
        let mut slots: Vec<(Slot, String)> = Vec::new();
        for (i, st) in entity.raw_supertypes.iter().enumerate() {
            if st.resolved.is_none() {
                slots.push((Slot::Supertype(i), st.raw_name.clone()));
            }
        }
        if let Some(r) = &entity.raw_return_type {
            if r.resolved.is_none() {
                slots.push((Slot::Return, r.raw_name.clone()));
            }
        }
        for (i, p) in entity.raw_parameter_types.iter().enumerate() {
            if p.resolved.is_none() {
                slots.push((Slot::Param(i), p.raw_name.clone()));
            }
        }
        if let Some(r) = &entity.receiver_type {
            if r.resolved.is_none() {
                slots.push((Slot::Receiver, r.raw_name.clone()));
            }
        }
        for (slot, raw) in slots {
            if let Some(target) = resolve_type_name(tree, id, &raw) {
                let entity = tree.entity_mut(id);
                match slot {
                    Slot::Supertype(i) => entity.raw_supertypes[i].resolved = Some(target),
                    Slot::Return => {
                        entity.raw_return_type.as_mut().unwrap().resolved = Some(target)
                    }
                    Slot::Param(i) => entity.raw_parameter_types[i].resolved = Some(target),
                    Slot::Receiver => {
                        entity.receiver_type.as_mut().unwrap().resolved = Some(target)
                    }
                }
                resolved += 1;
            }
        }
    }

    // Function-type parameter shapes.
    for (fn_id, index) in tree.fn_type_param_keys() {
        let shape = tree.fn_type_param(fn_id, index).unwrap();
        let mut raws: Vec<(usize, String)> = Vec::new();
        if let Some(r) = &shape.receiver {
            if r.resolved.is_none() {
                raws.push((0, r.raw_name.clone()));
            }
        }
        if let Some(r) = &shape.ret {
            if r.resolved.is_none() {
                raws.push((1, r.raw_name.clone()));
            }
        }
        let param_raws: Vec<(usize, String)> = shape
            .params
            .iter()
            .enumerate()
            .filter(|(_, p)| p.resolved.is_none())
            .map(|(i, p)| (i, p.raw_name.clone()))
            .collect();
        for (which, raw) in raws {
            if let Some(target) = resolve_type_name(tree, fn_id, &raw) {
                let shape = tree.fn_type_param_mut(fn_id, index).unwrap();
                if which == 0 {
                    shape.receiver.as_mut().unwrap().resolved = Some(target);
                } else {
                    shape.ret.as_mut().unwrap().resolved = Some(target);
                }
                resolved += 1;
            }
        }
        for (i, raw) in param_raws {
            if let Some(target) = resolve_type_name(tree, fn_id, &raw) {
                tree.fn_type_param_mut(fn_id, index).unwrap().params[i].resolved = Some(target);
                resolved += 1;
            }
        }
    }

    // Annotation uses, resolved at the annotated entity.
    for i in 0..tree.annotations().len() {
        let (target_entity, raw, already) = {
            let (e, r) = &tree.annotations()[i];
            (*e, r.raw_name.clone(), r.resolved.is_some())
        };
        if already {
            continue;
        }
        if let Some(annotation_ty) = resolve_type_name(tree, target_entity, &raw) {
            tree.annotations_mut()[i].1.resolved = Some(annotation_ty);
            resolved += 1;
        }
    }

    // Delegation targets last: `by b` resolves through b's declared
    // type, which the passes above have already filled in.
    for id in tree.ids().collect::<Vec<_>>() {
        let raw = match &tree.entity(id).delegates_to {
            Some(r) if r.resolved.is_none() => r.raw_name.clone(),
            _ => continue,
        };
        if let Some(target) = resolve_delegate_target(tree, id, &raw) {
            tree.entity_mut(id).delegates_to.as_mut().unwrap().resolved = Some(target);
            resolved += 1;
        }
    }

    resolved
}

enum Slot {
    Supertype(usize),
    Return,
    Param(usize),
    Receiver,
}

/// Type-position name resolution: dotted names resolve absolutely,
/// simple names through the scope chain, imports, then built-ins.
fn resolve_type_name(tree: &EntityTree, scope: EntityId, raw: &str) -> Option<EntityId> {
    if raw.contains('.') {
        return tree
            .by_qualified_name(raw)
            .filter(|&t| tree.entity(t).kind == EntityKind::Type);
    }
    let mut enclosing_path: Option<String> = None;
    let mut cursor = Some(scope);
    while let Some(current) = cursor {
        let entity = tree.entity(current);
        if enclosing_path.is_none() {
            if let Some(loc) = &entity.location {
                enclosing_path = Some(loc.path.clone());
            }
        }
        for &child in tree.children(current) {
            let ce = tree.entity(child);
            if ce.kind == EntityKind::Type && ce.name == raw {
                return Some(child);
            }
        }
        cursor = entity.parent;
    }
    if let Some(path) = enclosing_path {
        if let Some(file) = tree.file_by_path(&path) {
            for import in tree.imports(file) {
                if !import.wildcard && import.last_segment() == raw {
                    if let Some(target) = import.resolved {
                        if tree.entity(target).kind == EntityKind::Type {
                            return Some(target);
                        }
                    }
                }
            }
        }
    }
    tree.builtin(raw)
}

/// Delegation-target resolution: the head name is an expression, so
/// values in scope win (yielding their declared type) before types.
fn resolve_delegate_target(tree: &EntityTree, scope: EntityId, raw: &str) -> Option<EntityId> {
    if raw.contains('.') {
        return tree
            .by_qualified_name(raw)
            .filter(|&t| tree.entity(t).kind == EntityKind::Type);
    }
    let mut cursor = Some(scope);
    while let Some(current) = cursor {
        for &child in tree.children(current) {
            let ce = tree.entity(child);
            if ce.name == raw {
                match ce.kind {
                    EntityKind::Variable | EntityKind::Parameter | EntityKind::Property => {
                        return ce.raw_return_type.as_ref().and_then(|r| r.resolved);
                    }
                    EntityKind::Type => return Some(child),
                    _ => {}
                }
            }
        }
        cursor = tree.entity(current).parent;
    }
    resolve_type_name(tree, scope, raw)
}

/// Locates extension functions by their marks: every `isExtension`
/// function with a resolved receiver is registered so lookups on the
/// receiver type (built-ins included) can see it. Returns the
/// (function, extended type) pairs; unresolved receivers are skipped
/// with a diagnostic.
pub fn resolve_extensions(tree: &mut EntityTree) -> (Vec<(EntityId, EntityId)>, Vec<Diagnostic>) {
    let mut pairs = Vec::new();
    let mut diagnostics = Vec::new();
    for id in tree.ids().collect::<Vec<_>>() {
        let entity = tree.entity(id);
        if !entity.is_extension {
            continue;
        }
        match entity.receiver_type.as_ref().and_then(|r| r.resolved) {
            Some(receiver) => pairs.push((id, receiver)),
            None => {
                let (path, line) = entity
                    .receiver_type
                    .as_ref()
                    .map(|r| (r.use_site.path.clone(), r.use_site.line))
                    .unwrap_or_default();
                diagnostics.push(Diagnostic {
                    path,
                    line,
                    message: format!(
                        "receiver type of extension function `{}` did not resolve",
                        entity.qualified_name
                    ),
                });
            }
        }
    }
    for &(function, receiver) in &pairs {
        tree.register_extension(receiver, function);
    }
    (pairs, diagnostics)
}

/// Runs rounds of type propagation over all function bodies until a
/// round resolves nothing new or the round bound is reached. Returns
/// the rounds actually used.
pub fn run_inference(tree: &EntityTree, bodies: &[Body], config: &InferenceConfig) -> Inference {
    let mut state = Inference::default();
    for entity in tree.entities() {
        let declared = entity.raw_return_type.as_ref().and_then(|r| r.resolved);
        match entity.kind {
            EntityKind::Function => {
                if let Some(ty) = declared {
                    state.fn_returns.insert(entity.id, ty);
                }
            }
            EntityKind::Property | EntityKind::Parameter | EntityKind::Variable => {
                if let Some(ty) = declared {
                    state.var_types.insert(entity.id, ty);
                }
            }
            _ => {}
        }
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        let before = state.score();
        {
            let mut visitor = Visitor {
                tree,
                state: &mut state,
            };
            for body in bodies {
                visitor.visit_body(body);
            }
        }
        let after = state.score();
        if after == before || rounds >= config.max_rounds {
            break;
        }
    }
    state.rounds_used = rounds;
    state
}

/// Value of an expression during traversal.
#[derive(Debug, Clone, Copy)]
enum Val {
    /// An instance of the given type.
    Instance(EntityId),
    /// The type itself, used as a receiver for static members.
    Static(EntityId),
    Unknown,
}

struct LambdaFrame {
    params: Vec<(String, Option<EntityId>)>,
    receiver: Option<EntityId>,
}

enum NameHit {
    Value(EntityId),
    Type(EntityId),
    LambdaParam(Option<EntityId>),
    Miss,
}

enum CalleeHit {
    Function(EntityId),
    Type(EntityId),
}

struct Visitor<'a> {
    tree: &'a EntityTree,
    state: &'a mut Inference,
}

impl<'a> Visitor<'a> {
    fn visit_body(&mut self, body: &Body) {
        let mut frames = Vec::new();
        self.visit_stmts(&body.stmts, &mut frames, body.owner, &body.path);
    }

    fn visit_stmts(
        &mut self,
        stmts: &[Stmt],
        frames: &mut Vec<LambdaFrame>,
        owner: EntityId,
        path: &str,
    ) {
        for stmt in stmts {
            match stmt {
                Stmt::Local { var, init, .. } => {
                    if let Some(init) = init {
                        let val = self.visit_expr(init, frames, owner, path);
                        if let Val::Instance(ty) = val {
                            self.state.var_types.entry(*var).or_insert(ty);
                        }
                    }
                }
                Stmt::Expr(expr) => {
                    self.visit_expr(expr, frames, owner, path);
                }
                Stmt::Return { value, .. } => {
                    if let Some(value) = value {
                        let val = self.visit_expr(value, frames, owner, path);
                        if let Val::Instance(ty) = val {
                            match self.tree.entity(owner).kind {
                                EntityKind::Function => {
                                    self.state.fn_returns.entry(owner).or_insert(ty);
                                }
                                // Property initializers type the property.
                                _ => {
                                    self.state.var_types.entry(owner).or_insert(ty);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    fn bind(
        &mut self,
        eid: u32,
        owner: EntityId,
        target: EntityId,
        kind: PendingKind,
        path: &str,
        line: u32,
    ) {
        self.state.bindings.entry(eid).or_insert_with(|| Pending {
            owner,
            target,
            kind,
            path: path.to_string(),
            line,
        });
    }

    fn visit_expr(
        &mut self,
        expr: &Expr,
        frames: &mut Vec<LambdaFrame>,
        owner: EntityId,
        path: &str,
    ) -> Val {
        let val = match expr {
            Expr::Lit { ty, .. } => self.literal_type(*ty),
            Expr::Name { eid, name, line } => match self.resolve_value(name, frames, owner) {
                NameHit::Value(entity) => {
                    self.bind(*eid, owner, entity, PendingKind::Use, path, *line);
                    match self.state.var_types.get(&entity) {
                        Some(&ty) => Val::Instance(ty),
                        None => Val::Unknown,
                    }
                }
                NameHit::Type(ty) => Val::Static(ty),
                NameHit::LambdaParam(Some(ty)) => Val::Instance(ty),
                NameHit::LambdaParam(None) => Val::Unknown,
                NameHit::Miss => Val::Unknown,
            },
            Expr::Nav {
                eid,
                recv,
                name,
                line,
            } => {
                let recv_val = self.visit_expr(recv, frames, owner, path);
                match recv_val {
                    Val::Instance(recv_ty) => match self.member_property(recv_ty, name) {
                        Some(property) => {
                            self.bind(*eid, owner, property, PendingKind::Use, path, *line);
                            match self.state.var_types.get(&property) {
                                Some(&ty) => Val::Instance(ty),
                                None => Val::Unknown,
                            }
                        }
                        None => Val::Unknown,
                    },
                    Val::Static(recv_ty) => match self.static_property(recv_ty, name) {
                        Some(property) => {
                            self.bind(*eid, owner, property, PendingKind::Use, path, *line);
                            match self.state.var_types.get(&property) {
                                Some(&ty) => Val::Instance(ty),
                                None => Val::Unknown,
                            }
                        }
                        None => Val::Unknown,
                    },
                    Val::Unknown => Val::Unknown,
                }
            }
            Expr::Call {
                eid,
                callee,
                args,
                line,
            } => {
                let hit = match &**callee {
                    Expr::Name { name, .. } => {
                        self.resolve_callable(name, args.len(), frames, owner)
                    }
                    Expr::Nav { recv, name, .. } => {
                        let recv_val = self.visit_expr(recv, frames, owner, path);
                        match recv_val {
                            Val::Instance(recv_ty) => self
                                .member_function(recv_ty, name, args.len())
                                .map(CalleeHit::Function),
                            Val::Static(recv_ty) => self
                                .static_function(recv_ty, name, args.len())
                                .map(CalleeHit::Function),
                            Val::Unknown => None,
                        }
                    }
                    other => {
                        self.visit_expr(other, frames, owner, path);
                        None
                    }
                };
                let val = match hit {
                    Some(CalleeHit::Function(function)) => {
                        self.bind(*eid, owner, function, PendingKind::Call, path, *line);
                        // Bind receiver-typed lambda arguments to the
                        // callee's function-type parameter shapes.
                        for (index, arg) in args.iter().enumerate() {
                            if let Expr::Lambda(lambda) = arg {
                                if self.state.lambda_receivers.contains_key(&lambda.lid) {
                                    continue;
                                }
                                if let Some(shape) = self.tree.fn_type_param(function, index) {
                                    if let Some(receiver) =
                                        shape.receiver.as_ref().and_then(|r| r.resolved)
                                    {
                                        self.state.lambda_receivers.insert(lambda.lid, receiver);
                                    }
                                }
                            }
                        }
                        match self.state.fn_returns.get(&function) {
                            Some(&ty) => Val::Instance(ty),
                            None => Val::Unknown,
                        }
                    }
                    Some(CalleeHit::Type(ty)) => {
                        self.bind(*eid, owner, ty, PendingKind::Create, path, *line);
                        Val::Instance(ty)
                    }
                    None => Val::Unknown,
                };
                for arg in args {
                    self.visit_expr(arg, frames, owner, path);
                }
                val
            }
            Expr::New {
                eid,
                type_name,
                args,
                line,
            } => {
                let val = match resolve_type_name(self.tree, owner, type_name) {
                    Some(ty) => {
                        self.bind(*eid, owner, ty, PendingKind::Create, path, *line);
                        Val::Instance(ty)
                    }
                    None => Val::Unknown,
                };
                for arg in args {
                    self.visit_expr(arg, frames, owner, path);
                }
                val
            }
            Expr::Cast {
                eid,
                value,
                type_name,
                line,
            } => {
                self.visit_expr(value, frames, owner, path);
                match resolve_type_name(self.tree, owner, type_name) {
                    Some(ty) => {
                        self.bind(*eid, owner, ty, PendingKind::Cast, path, *line);
                        Val::Instance(ty)
                    }
                    None => Val::Unknown,
                }
            }
            Expr::Assign { target, value, .. } => {
                self.visit_expr(target, frames, owner, path);
                self.visit_expr(value, frames, owner, path);
                Val::Unknown
            }
            Expr::Lambda(lambda) => {
                self.visit_lambda(lambda, frames, owner, path);
                Val::Unknown
            }
            Expr::OpChain { operands, .. } => {
                for operand in operands {
                    self.visit_expr(operand, frames, owner, path);
                }
                Val::Unknown
            }
            Expr::Branch {
                cond,
                then_stmts,
                else_stmts,
                ..
            } => {
                self.visit_expr(cond, frames, owner, path);
                self.visit_stmts(then_stmts, frames, owner, path);
                self.visit_stmts(else_stmts, frames, owner, path);
                Val::Unknown
            }
            Expr::Loop { cond, body, .. } => {
                self.visit_expr(cond, frames, owner, path);
                self.visit_stmts(body, frames, owner, path);
                Val::Unknown
            }
            Expr::Unknown { .. } => Val::Unknown,
        };
        match val {
            Val::Instance(ty) | Val::Static(ty) => self.state.set_expr_type(expr.eid(), ty),
            Val::Unknown => {}
        }
        val
    }

    fn visit_lambda(
        &mut self,
        lambda: &Lambda,
        frames: &mut Vec<LambdaFrame>,
        owner: EntityId,
        path: &str,
    ) {
        let params = lambda
            .params
            .iter()
            .map(|p| {
                let ty = p
                    .declared_type
                    .as_ref()
                    .and_then(|raw| resolve_type_name(self.tree, owner, raw));
                (p.name.clone(), ty)
            })
            .collect();
        let receiver = self.state.lambda_receivers.get(&lambda.lid).copied();
        frames.push(LambdaFrame { params, receiver });
        self.visit_stmts(&lambda.stmts, frames, owner, path);
        frames.pop();
    }

    fn literal_type(&self, ty: LitTy) -> Val {
        let name = match ty {
            LitTy::Int => "Int",
            LitTy::Long => "Long",
            LitTy::Double => "Double",
            LitTy::Float => "Float",
            LitTy::Boolean => "Boolean",
            LitTy::Char => "Char",
            LitTy::Str => "String",
            LitTy::Null => return Val::Unknown,
        };
        match self.tree.builtin(name) {
            Some(id) => Val::Instance(id),
            None => Val::Unknown,
        }
    }

    /// Value-position name resolution. Shadowing order inside lambdas:
    /// explicit lambda parameters, then receiver members, then the
    /// enclosing scopes, then imports and built-in type names.
    fn resolve_value(&self, name: &str, frames: &[LambdaFrame], owner: EntityId) -> NameHit {
        for frame in frames.iter().rev() {
            for (param_name, param_ty) in &frame.params {
                if param_name == name {
                    return NameHit::LambdaParam(*param_ty);
                }
            }
            if let Some(receiver) = frame.receiver {
                if let Some(property) = self.member_property(receiver, name) {
                    return NameHit::Value(property);
                }
            }
        }
        let mut enclosing_path: Option<String> = None;
        let mut cursor = Some(owner);
        while let Some(current) = cursor {
            let entity = self.tree.entity(current);
            if enclosing_path.is_none() {
                if let Some(loc) = &entity.location {
                    enclosing_path = Some(loc.path.clone());
                }
            }
            if entity.kind == EntityKind::Type {
                // Type scopes see inherited members too.
                if let Some(property) = self.member_property(current, name) {
                    return NameHit::Value(property);
                }
            }
            for &child in self.tree.children(current) {
                let ce = self.tree.entity(child);
                if ce.name != name {
                    continue;
                }
                match ce.kind {
                    EntityKind::Variable | EntityKind::Parameter | EntityKind::Property => {
                        return NameHit::Value(child)
                    }
                    EntityKind::Type => return NameHit::Type(child),
                    _ => {}
                }
            }
            cursor = entity.parent;
        }
        if let Some(path) = enclosing_path {
            if let Some(file) = self.tree.file_by_path(&path) {
                for import in self.tree.imports(file) {
                    if !import.wildcard && import.last_segment() == name {
                        if let Some(target) = import.resolved {
                            if self.tree.entity(target).kind == EntityKind::Type {
                                return NameHit::Type(target);
                            }
                        }
                    }
                }
            }
        }
        match self.tree.builtin(name) {
            Some(builtin) => NameHit::Type(builtin),
            None => NameHit::Miss,
        }
    }

    /// Bare-call resolution: receiver members of enclosing lambdas, the
    /// scope chain (with overloads broken by name, then arity, then
    /// first declaration in id order), imports, then creation when the
    /// name denotes a type.
    fn resolve_callable(
        &self,
        name: &str,
        arity: usize,
        frames: &[LambdaFrame],
        owner: EntityId,
    ) -> Option<CalleeHit> {
        for frame in frames.iter().rev() {
            if frame.params.iter().any(|(p, _)| p == name) {
                return None;
            }
            if let Some(receiver) = frame.receiver {
                let candidates = self.member_function_candidates(receiver, name);
                if !candidates.is_empty() {
                    return Some(CalleeHit::Function(pick_by_arity(
                        self.tree,
                        &candidates,
                        arity,
                    )));
                }
            }
        }
        let mut candidates: Vec<EntityId> = Vec::new();
        let mut type_hit: Option<EntityId> = None;
        let mut enclosing_path: Option<String> = None;
        let mut cursor = Some(owner);
        while let Some(current) = cursor {
            let entity = self.tree.entity(current);
            if enclosing_path.is_none() {
                if let Some(loc) = &entity.location {
                    enclosing_path = Some(loc.path.clone());
                }
            }
            if entity.kind == EntityKind::Type {
                candidates.extend(self.member_function_candidates(current, name));
            } else {
                for &child in self.tree.children(current) {
                    let ce = self.tree.entity(child);
                    if ce.name == name && ce.kind == EntityKind::Function {
                        candidates.push(child);
                    }
                }
            }
            if type_hit.is_none() {
                for &child in self.tree.children(current) {
                    let ce = self.tree.entity(child);
                    if ce.name == name && ce.kind == EntityKind::Type {
                        type_hit = Some(child);
                        break;
                    }
                }
            }
            cursor = entity.parent;
        }
        if let Some(path) = &enclosing_path {
            if let Some(file) = self.tree.file_by_path(path) {
                for import in self.tree.imports(file) {
                    if import.wildcard || import.last_segment() != name {
                        continue;
                    }
                    if let Some(target) = import.resolved {
                        match self.tree.entity(target).kind {
                            EntityKind::Function => candidates.push(target),
                            EntityKind::Type if type_hit.is_none() => type_hit = Some(target),
                            _ => {}
                        }
                    }
                }
            }
        }
        if type_hit.is_none() {
            type_hit = self.tree.builtin(name);
        }
        if let Some(&exact) = candidates
            .iter()
            .find(|&&f| self.tree.entity(f).raw_parameter_types.len() == arity)
        {
            return Some(CalleeHit::Function(exact));
        }
        if let Some(ty) = type_hit {
            return Some(CalleeHit::Type(ty));
        }
        candidates.first().map(|&f| CalleeHit::Function(f))
    }

    /// Member functions of a type: own declarations, inherited ones
    /// breadth-first, then extension functions on the type and its
    /// supertypes.
    fn member_function_candidates(&self, ty: EntityId, name: &str) -> Vec<EntityId> {
        let mut out = Vec::new();
        for t in self.supertype_order(ty) {
            for &child in self.tree.children(t) {
                let ce = self.tree.entity(child);
                if ce.kind == EntityKind::Function && ce.name == name {
                    out.push(child);
                }
            }
        }
        for t in self.supertype_order(ty) {
            for &function in self.tree.extensions_on(t) {
                if self.tree.entity(function).name == name {
                    out.push(function);
                }
            }
        }
        out
    }

    fn member_function(&self, ty: EntityId, name: &str, arity: usize) -> Option<EntityId> {
        let candidates = self.member_function_candidates(ty, name);
        if candidates.is_empty() {
            None
        } else {
            Some(pick_by_arity(self.tree, &candidates, arity))
        }
    }

    fn member_property(&self, ty: EntityId, name: &str) -> Option<EntityId> {
        for t in self.supertype_order(ty) {
            for &child in self.tree.children(t) {
                let ce = self.tree.entity(child);
                if ce.kind == EntityKind::Property && ce.name == name {
                    return Some(child);
                }
            }
        }
        None
    }

    fn static_property(&self, ty: EntityId, name: &str) -> Option<EntityId> {
        self.tree.children(ty).iter().copied().find(|&c| {
            let ce = self.tree.entity(c);
            ce.kind == EntityKind::Property && ce.name == name
        })
    }

    fn static_function(&self, ty: EntityId, name: &str, arity: usize) -> Option<EntityId> {
        let candidates: Vec<EntityId> = self
            .tree
            .children(ty)
            .iter()
            .copied()
            .filter(|&c| {
                let ce = self.tree.entity(c);
                ce.kind == EntityKind::Function && ce.name == name
            })
            .collect();
        if candidates.is_empty() {
            None
        } else {
            Some(pick_by_arity(self.tree, &candidates, arity))
        }
    }

    /// Breadth-first supertype order starting at the type itself, with
    /// a cycle guard.
    fn supertype_order(&self, ty: EntityId) -> Vec<EntityId> {
        let mut order = Vec::new();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([ty]);
        while let Some(current) = queue.pop_front() {
            if !seen.insert(current) {
                continue;
            }
            order.push(current);
            for st in &self.tree.entity(current).raw_supertypes {
                if let Some(resolved) = st.resolved {
                    queue.push_back(resolved);
                }
            }
        }
        order
    }
}

fn pick_by_arity(tree: &EntityTree, candidates: &[EntityId], arity: usize) -> EntityId {
    candidates
        .iter()
        .copied()
        .find(|&f| tree.entity(f).raw_parameter_types.len() == arity)
        .unwrap_or(candidates[0])
}

/// Records all thirteen relation kinds from the resolved tree, the
/// inference bindings, and the located extensions. Relations whose
/// target did not resolve are dropped; built-in targets are kept only
/// for the Extension kind.
pub fn collect_relations(
    tree: &EntityTree,
    inference: &Inference,
    extensions: &[(EntityId, EntityId)],
) -> Result<RelationStore, ModelError> {
    let mut store = RelationStore::new();
    let record = |store: &mut RelationStore,
                  source: EntityId,
                  target: EntityId,
                  kind: RelationKind,
                  site: UseSite|
     -> Result<(), ModelError> {
        if tree.is_builtin(target) && kind != RelationKind::Extension {
            return Ok(());
        }
        store.record(tree, source, target, kind, site)
    };

    // Import: one occurrence per resolved directive.
    for file in tree.files() {
        let path = tree
            .entity(file)
            .location
            .as_ref()
            .map(|l| l.path.clone())
            .unwrap_or_default();
        for import in tree.imports(file) {
            if let Some(target) = import.resolved {
                record(
                    &mut store,
                    file,
                    target,
                    RelationKind::Import,
                    UseSite {
                        path: path.clone(),
                        line: import.line,
                    },
                )?;
            }
        }
    }

    // Declaration-driven relations, in entity id order.
    for id in tree.ids() {
        let entity = tree.entity(id);
        if entity.is_synthetic {
            continue;
        }
        for st in &entity.raw_supertypes {
            if let Some(target) = st.resolved {
                let kind = if tree.is_interface(target) {
                    RelationKind::Implement
                } else {
                    RelationKind::Extend
                };
                record(&mut store, id, target, kind, st.use_site.clone())?;
            }
        }
        if entity.kind == EntityKind::Property {
            if let (Some(parent), Some(r)) = (entity.parent, entity.raw_return_type.as_ref()) {
                if let Some(target) = r.resolved {
                    if tree.entity(parent).kind == EntityKind::Type && target != parent {
                        record(
                            &mut store,
                            parent,
                            target,
                            RelationKind::Contain,
                            r.use_site.clone(),
                        )?;
                    }
                }
            }
        }
        if entity.kind == EntityKind::Function {
            for p in &entity.raw_parameter_types {
                if let Some(target) = p.resolved {
                    record(
                        &mut store,
                        id,
                        target,
                        RelationKind::Parameter,
                        p.use_site.clone(),
                    )?;
                }
            }
            if let Some(r) = &entity.raw_return_type {
                if let Some(target) = r.resolved {
                    record(
                        &mut store,
                        id,
                        target,
                        RelationKind::Return,
                        r.use_site.clone(),
                    )?;
                }
            }
        }
        if let Some(d) = &entity.delegates_to {
            if let Some(target) = d.resolved {
                // Property delegation is folded to the owning class.
                let source = match (entity.kind, entity.parent) {
                    (EntityKind::Property, Some(parent))
                        if tree.entity(parent).kind == EntityKind::Type =>
                    {
                        parent
                    }
                    _ => id,
                };
                record(
                    &mut store,
                    source,
                    target,
                    RelationKind::Delegate,
                    d.use_site.clone(),
                )?;
            }
        }
    }

    // Annotation uses.
    for (annotated, r) in tree.annotations() {
        if let Some(target) = r.resolved {
            record(
                &mut store,
                *annotated,
                target,
                RelationKind::Annotation,
                r.use_site.clone(),
            )?;
        }
    }

    // Expression bindings, in expression id order.
    for pending in inference.bindings.values() {
        record(
            &mut store,
            pending.owner,
            pending.target,
            pending.kind.relation(),
            UseSite {
                path: pending.path.clone(),
                line: pending.line,
            },
        )?;
    }

    // Located extensions.
    for &(function, receiver) in extensions {
        let site = tree
            .entity(function)
            .receiver_type
            .as_ref()
            .map(|r| r.use_site.clone())
            .unwrap_or_default();
        record(
            &mut store,
            function,
            receiver,
            RelationKind::Extension,
            site,
        )?;
    }

    Ok(store)
}

/// Full resolver pipeline output.
#[derive(Debug)]
pub struct Resolution {
    pub store: RelationStore,
    pub inference: Inference,
    pub extensions: Vec<(EntityId, EntityId)>,
    pub diagnostics: Vec<Diagnostic>,
    pub resolved_type_refs: usize,
}

impl Resolution {
    pub fn rounds_used(&self) -> usize {
        self.inference.rounds_used
    }
}

/// resolve_type_refs -> resolve_extensions -> run_inference ->
/// collect_relations over already-built entities.
pub fn resolve_all(
    tree: &mut EntityTree,
    bodies: &[Body],
    config: &InferenceConfig,
) -> Result<Resolution, ModelError> {
    let resolved_type_refs = resolve_type_refs(tree);
    let (extensions, diagnostics) = resolve_extensions(tree);
    let inference = run_inference(tree, bodies, config);
    let store = collect_relations(tree, &inference, &extensions)?;
    Ok(Resolution {
        store,
        inference,
        extensions,
        diagnostics,
        resolved_type_refs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::IrIds;
    use crate::kotlin::{build_kotlin_entities, parse_kotlin};
    use crate::model::SourceLanguage;

    fn extract(sources: &[(&str, &str)]) -> (EntityTree, Resolution) {
        extract_with(sources, &InferenceConfig::default())
    }

    fn extract_with(
        sources: &[(&str, &str)],
        config: &InferenceConfig,
    ) -> (EntityTree, Resolution) {
        let mut tree = EntityTree::with_builtins();
        let mut ids = IrIds::new();
        let mut bodies = Vec::new();
        for (path, src) in sources {
            let (ast, _) = parse_kotlin(src, path).unwrap();
            let build = build_kotlin_entities(&ast, path, &mut tree, &mut ids).unwrap();
            bodies.extend(build.bodies);
        }
        let resolution = resolve_all(&mut tree, &bodies, config).unwrap();
        (tree, resolution)
    }

    fn qn(tree: &EntityTree, name: &str) -> EntityId {
        tree.by_qualified_name(name)
            .unwrap_or_else(|| panic!("missing `{name}`"))
    }

    #[test]
    fn declared_refs_resolve_and_misses_stay_unresolved() {
        let src = "class Bar\nclass User {\n    val a: Bar = Bar()\n    val b: com.missing.Thing? = null\n    val c: Int = 0\n}";
        let (tree, _) = extract(&[("u.kt", src)]);
        let a = qn(&tree, "User.a");
        assert_eq!(
            tree.entity(a).raw_return_type.as_ref().unwrap().resolved,
            Some(qn(&tree, "Bar"))
        );
        let b = qn(&tree, "User.b");
        assert_eq!(
            tree.entity(b).raw_return_type.as_ref().unwrap().resolved,
            None
        );
        let c = qn(&tree, "User.c");
        assert_eq!(
            tree.entity(c).raw_return_type.as_ref().unwrap().resolved,
            tree.builtin("Int")
        );
    }

    #[test]
    fn one_step_chain_resolves_in_round_one() {
        let src = "class Bar(val x: Int)\nclass U {\n    fun f(): Unit {\n        val b = Bar(1)\n        b.x\n    }\n}";
        let (tree, resolution) = extract(&[("u.kt", src)]);
        let f = qn(&tree, "U.f");
        let bar = qn(&tree, "Bar");
        let bar_x = qn(&tree, "Bar.x");
        assert!(resolution.store.get(f, bar, RelationKind::Create).is_some());
        assert!(resolution.store.get(f, bar_x, RelationKind::Use).is_some());
    }

    #[test]
    fn chained_call_needs_a_second_round() {
        let src = "class C {\n    fun consume(): Unit {\n        makeStep().advance()\n    }\n}\nfun makeStep() = Step()\nclass Step {\n    fun advance(): Unit {}\n}";
        let one = InferenceConfig { max_rounds: 1 };
        let (tree1, r1) = extract_with(&[("c.kt", src)], &one);
        let consume1 = qn(&tree1, "C.consume");
        let advance1 = qn(&tree1, "Step.advance");
        assert!(r1
            .store
            .get(consume1, advance1, RelationKind::Call)
            .is_none());

        let (tree2, r2) = extract(&[("c.kt", src)]);
        let consume = qn(&tree2, "C.consume");
        let advance = qn(&tree2, "Step.advance");
        let make_step = qn(&tree2, "makeStep");
        assert!(r2
            .store
            .get(consume, make_step, RelationKind::Call)
            .is_some());
        assert!(r2.store.get(consume, advance, RelationKind::Call).is_some());
        assert!(r2.rounds_used() <= 5);
    }

    #[test]
    fn receiver_lambda_resolves_bare_names_against_the_receiver() {
        let src = "class Bar(val x: Int)\nfun calculate(param: Bar.() -> Int) {}\nclass Foo(val x: Int) {\n    fun calculateInFoo() {\n        calculate { add(x) }\n    }\n}";
        let (tree, resolution) = extract(&[("receiver_lambda.kt", src)]);
        let caller = qn(&tree, "Foo.calculateInFoo");
        let bar_x = qn(&tree, "Bar.x");
        let foo_x = qn(&tree, "Foo.x");
        assert!(resolution
            .store
            .get(caller, bar_x, RelationKind::Use)
            .is_some());
        assert!(resolution
            .store
            .get(caller, foo_x, RelationKind::Use)
            .is_none());
        assert!(resolution
            .store
            .get(caller, qn(&tree, "calculate"), RelationKind::Call)
            .is_some());
    }

    #[test]
    fn extensions_resolve_against_builtins_and_classes() {
        let src = "fun Int.twice(): Int = 0\nclass Widget(val size: Int)\nfun Widget.describe(): String = \"w\"\nclass U {\n    fun run(): Unit {\n        3.twice()\n        val w = Widget(1)\n        w.describe()\n    }\n}";
        let (tree, resolution) = extract(&[("e.kt", src)]);
        let twice = qn(&tree, "twice");
        let describe = qn(&tree, "describe");
        let int = tree.builtin("Int").unwrap();
        let widget = qn(&tree, "Widget");
        let run = qn(&tree, "U.run");
        assert_eq!(
            resolution.extensions,
            vec![(twice, int), (describe, widget)]
        );
        assert!(resolution
            .store
            .get(twice, int, RelationKind::Extension)
            .is_some());
        assert!(resolution
            .store
            .get(describe, widget, RelationKind::Extension)
            .is_some());
        assert!(resolution
            .store
            .get(run, twice, RelationKind::Call)
            .is_some());
        assert!(resolution
            .store
            .get(run, describe, RelationKind::Call)
            .is_some());
    }

    #[test]
    fn no_extensions_yields_empty_list() {
        let (_, resolution) = extract(&[("p.kt", "class Plain")]);
        assert!(resolution.extensions.is_empty());
    }

    #[test]
    fn class_and_property_delegation_fold_to_the_taxonomy() {
        let src = "interface Greeter {\n    fun greet(): String\n}\nclass ConsoleGreeter : Greeter {\n    override fun greet(): String = \"hi\"\n}\nclass Wrap(backing: ConsoleGreeter) : Greeter by backing\nclass Registry {\n    val fallback by ConsoleGreeter()\n}";
        let (tree, resolution) = extract(&[("d.kt", src)]);
        let wrap = qn(&tree, "Wrap");
        let registry = qn(&tree, "Registry");
        let console = qn(&tree, "ConsoleGreeter");
        let greeter = qn(&tree, "Greeter");
        assert!(resolution
            .store
            .get(wrap, console, RelationKind::Delegate)
            .is_some());
        assert!(resolution
            .store
            .get(wrap, greeter, RelationKind::Implement)
            .is_some());
        assert!(resolution
            .store
            .get(registry, console, RelationKind::Delegate)
            .is_some());
    }

    #[test]
    fn monotone_rounds_and_quiet_fixpoint() {
        let src = "class C {\n    fun consume(): Unit {\n        makeStep().advance()\n    }\n}\nfun makeStep() = Step()\nclass Step {\n    fun advance(): Unit {}\n}";
        let (_, full) = extract(&[("c.kt", src)]);
        let converged = full.rounds_used();
        let mut previous = 0usize;
        for k in 1..=converged {
            let (_, partial) = extract_with(&[("c.kt", src)], &InferenceConfig { max_rounds: k });
            let typed = partial.inference.typed_expr_count();
            assert!(typed >= previous, "typed expressions shrank between rounds");
            previous = typed;
        }
        // One extra round past convergence resolves nothing new.
        let (_, extra) = extract_with(
            &[("c.kt", src)],
            &InferenceConfig {
                max_rounds: converged + 1,
            },
        );
        assert_eq!(
            extra.inference.typed_expr_count(),
            full.inference.typed_expr_count()
        );
        assert_eq!(extra.store.len(), full.store.len());
    }

    #[test]
    fn relations_never_reference_unresolved_endpoints_or_java_delegates() {
        let src =
            "class Bar(val x: Int)\nclass U {\n    fun f(): Unit {\n        ghost()\n    }\n}";
        let (tree, resolution) = extract(&[("u.kt", src)]);
        for relation in resolution.store.iter() {
            assert!(relation.source.index() < tree.len());
            assert!(relation.target.index() < tree.len());
            if relation.kind.kotlin_only_source() {
                assert_ne!(tree.entity(relation.source).language, SourceLanguage::Java);
            }
        }
    }
}
