//! Entity extraction for parsed Kotlin files: interns file, package,
//! type, function, property, parameter, and local-variable entities,
//! marks extension functions, and synthesizes implicit accessors.

use crate::ir::{Body, Expr, FileBuild, IrIds, Lambda, LambdaParam, LitTy, Stmt};
use crate::kotlin::ast::*;
use crate::model::{
    EntityId, EntityKind, EntityProto, EntityTree, FileLocation, FnTypeShape, ImportDirective,
    ModelError, SourceLanguage, TypeRef,
};

pub fn build_kotlin_entities(
    ast: &KtFile,
    path: &str,
    tree: &mut EntityTree,
    ids: &mut IrIds,
) -> Result<FileBuild, ModelError> {
    let mut builder = Builder {
        tree,
        ids,
        path,
        entities: Vec::new(),
        bodies: Vec::new(),
    };
    let file = builder.build_file(ast)?;
    Ok(FileBuild {
        file,
        entities: builder.entities,
        bodies: builder.bodies,
    })
}

struct Builder<'a> {
    tree: &'a mut EntityTree,
    ids: &'a mut IrIds,
    path: &'a str,
    entities: Vec<EntityId>,
    bodies: Vec<Body>,
}

impl<'a> Builder<'a> {
    fn loc(&self, start: u32, end: u32) -> FileLocation {
        FileLocation {
            path: self.path.to_string(),
            start_line: start,
            end_line: end,
        }
    }

    fn type_ref(&self, name: &KtTypeName) -> TypeRef {
        TypeRef::new(name.name.clone(), self.path, name.line)
    }

    fn intern(&mut self, proto: EntityProto) -> Result<EntityId, ModelError> {
        let id = self.tree.intern(proto)?;
        self.entities.push(id);
        Ok(id)
    }

    fn build_file(&mut self, ast: &KtFile) -> Result<EntityId, ModelError> {
        let package_name = ast.package.clone().unwrap_or_default();
        let package = self
            .tree
            .intern_package(&package_name, SourceLanguage::Kotlin);
        let file_name = self
            .path
            .rsplit('/')
            .next()
            .unwrap_or(self.path)
            .to_string();
        let file = self.intern(
            EntityProto::new(file_name, EntityKind::File, SourceLanguage::Kotlin)
                .with_parent(package)
                .with_location(self.loc(1, ast.end_line)),
        )?;
        for import in &ast.imports {
            self.tree.add_import(
                file,
                ImportDirective {
                    raw_path: import.path.clone(),
                    line: import.line,
                    wildcard: import.wildcard,
                    is_static: false,
                    resolved: None,
                },
            );
        }
        for decl in &ast.decls {
            self.build_decl(decl, package)?;
        }
        Ok(file)
    }

    fn build_decl(&mut self, decl: &KtDecl, parent: EntityId) -> Result<(), ModelError> {
        match decl {
            KtDecl::Class(class) => self.build_class(class, parent),
            KtDecl::Function(fun) => self.build_function(fun, parent).map(|_| ()),
            KtDecl::Property(prop) => self.build_property(prop, parent).map(|_| ()),
        }
    }

    fn build_class(&mut self, class: &KtClass, parent: EntityId) -> Result<(), ModelError> {
        let mut proto = EntityProto::new(&class.name, EntityKind::Type, SourceLanguage::Kotlin)
            .with_parent(parent)
            .with_location(self.loc(class.line, class.end_line));
        for supertype in &class.supertypes {
            proto.raw_supertypes.push(TypeRef::new(
                supertype.name.clone(),
                self.path,
                supertype.line,
            ));
        }
        // A `by` clause on a supertype delegates the class's implementation.
        for supertype in &class.supertypes {
            if let Some(delegate) = &supertype.delegate {
                if let Some((head, line)) = delegate_head(delegate) {
                    proto.delegates_to = Some(TypeRef::new(head, self.path, line));
                }
                break;
            }
        }
        let class_id = self.intern(proto)?;
        if class.kind == KtClassKind::Interface {
            self.tree.mark_interface(class_id);
        }
        for annotation in &class.annotations {
            let r = TypeRef::new(annotation.name.clone(), self.path, annotation.line);
            self.tree.add_annotation(class_id, r);
        }
        for param in &class.ctor_params {
            match param.binding {
                KtBinding::Val | KtBinding::Var => {
                    let mut prop =
                        EntityProto::new(&param.name, EntityKind::Property, SourceLanguage::Kotlin)
                            .with_parent(class_id)
                            .with_location(self.loc(param.line, param.line));
                    prop.raw_return_type = Some(TypeRef::new(
                        param.ty.raw_text(),
                        self.path,
                        param.ty.line(),
                    ));
                    let prop_id = self.intern(prop)?;
                    if param.binding == KtBinding::Var {
                        self.tree.set_mutable_property(prop_id);
                    }
                    let accessors = synthesize_accessors(self.tree, prop_id);
                    self.entities.extend(accessors);
                }
                KtBinding::None => {
                    let mut p = EntityProto::new(
                        &param.name,
                        EntityKind::Parameter,
                        SourceLanguage::Kotlin,
                    )
                    .with_parent(class_id)
                    .with_location(self.loc(param.line, param.line));
                    p.raw_return_type = Some(TypeRef::new(
                        param.ty.raw_text(),
                        self.path,
                        param.ty.line(),
                    ));
                    self.intern(p)?;
                }
            }
        }
        for member in &class.members {
            self.build_decl(member, class_id)?;
        }
        Ok(())
    }

    fn build_function(
        &mut self,
        fun: &KtFunction,
        parent: EntityId,
    ) -> Result<EntityId, ModelError> {
        let mut proto = EntityProto::new(&fun.name, EntityKind::Function, SourceLanguage::Kotlin)
            .with_parent(parent)
            .with_location(self.loc(fun.line, fun.end_line));
        if let Some(receiver) = &fun.receiver {
            proto.is_extension = true;
            proto.receiver_type = Some(self.type_ref(receiver));
        }
        if let Some(ret) = &fun.return_type {
            proto.raw_return_type = Some(self.type_ref(ret));
        }
        for param in &fun.params {
            proto.raw_parameter_types.push(TypeRef::new(
                param.ty.raw_text(),
                self.path,
                param.ty.line(),
            ));
        }
        let fn_id = self.intern(proto)?;
        for annotation in &fun.annotations {
            let r = TypeRef::new(annotation.name.clone(), self.path, annotation.line);
            self.tree.add_annotation(fn_id, r);
        }
        for (index, param) in fun.params.iter().enumerate() {
            let mut p =
                EntityProto::new(&param.name, EntityKind::Parameter, SourceLanguage::Kotlin)
                    .with_parent(fn_id)
                    .with_location(self.loc(param.line, param.line));
            p.raw_return_type = match &param.ty {
                KtTypeUse::Plain(t) => Some(self.type_ref(t)),
                KtTypeUse::Function { .. } => Some(TypeRef::new(
                    param.ty.raw_text(),
                    self.path,
                    param.ty.line(),
                )),
            };
            self.intern(p)?;
            if let KtTypeUse::Function {
                receiver,
                params,
                ret,
                ..
            } = &param.ty
            {
                self.tree.set_fn_type_param(
                    fn_id,
                    index,
                    FnTypeShape {
                        receiver: receiver.as_ref().map(|r| self.type_ref(r)),
                        params: params.iter().map(|p| self.type_ref(p)).collect(),
                        ret: ret.as_ref().map(|r| self.type_ref(r)),
                    },
                );
            }
        }
        if let Some(body) = &fun.body {
            let stmts = match body {
                KtBody::Block(stmts) => self.lower_stmts(stmts, fn_id)?,
                KtBody::Expr(expr) => {
                    let value = self.lower_expr(expr, fn_id)?;
                    vec![Stmt::Return {
                        value: Some(value),
                        line: expr.line(),
                    }]
                }
            };
            self.bodies.push(Body {
                owner: fn_id,
                path: self.path.to_string(),
                stmts,
            });
        }
        Ok(fn_id)
    }

    fn build_property(
        &mut self,
        prop: &KtProperty,
        parent: EntityId,
    ) -> Result<EntityId, ModelError> {
        let mut proto = EntityProto::new(&prop.name, EntityKind::Property, SourceLanguage::Kotlin)
            .with_parent(parent)
            .with_location(self.loc(prop.line, prop.line));
        if let Some(ty) = &prop.ty {
            proto.raw_return_type = Some(self.type_ref(ty));
        }
        if let Some(delegate) = &prop.delegate {
            if let Some((head, line)) = delegate_head(delegate) {
                proto.delegates_to = Some(TypeRef::new(head, self.path, line));
            }
        }
        let prop_id = self.intern(proto)?;
        if prop.mutable {
            self.tree.set_mutable_property(prop_id);
        }
        for annotation in &prop.annotations {
            let r = TypeRef::new(annotation.name.clone(), self.path, annotation.line);
            self.tree.add_annotation(prop_id, r);
        }
        let accessors = synthesize_accessors(self.tree, prop_id);
        self.entities.extend(accessors);
        if let Some(init) = &prop.init {
            let value = self.lower_expr(init, prop_id)?;
            let stmts = vec![Stmt::Return {
                value: Some(value),
                line: init.line(),
            }];
            self.bodies.push(Body {
                owner: prop_id,
                path: self.path.to_string(),
                stmts,
            });
        }
        Ok(prop_id)
    }

    fn lower_stmts(&mut self, stmts: &[KtStmt], scope: EntityId) -> Result<Vec<Stmt>, ModelError> {
        let mut out = Vec::new();
        for stmt in stmts {
            match stmt {
                KtStmt::Local {
                    name,
                    ty,
                    init,
                    line,
                    ..
                } => {
                    let mut proto =
                        EntityProto::new(name, EntityKind::Variable, SourceLanguage::Kotlin)
                            .with_parent(scope)
                            .with_location(self.loc(*line, *line));
                    if let Some(t) = ty {
                        proto.raw_return_type = Some(self.type_ref(t));
                    }
                    let var = self.tree.intern(proto)?;
                    self.entities.push(var);
                    let init = match init {
                        Some(e) => Some(self.lower_expr(e, scope)?),
                        None => None,
                    };
                    out.push(Stmt::Local {
                        var,
                        init,
                        line: *line,
                    });
                }
                KtStmt::Expr(expr) => out.push(Stmt::Expr(self.lower_expr(expr, scope)?)),
                KtStmt::Return { value, line } => {
                    let value = match value {
                        Some(e) => Some(self.lower_expr(e, scope)?),
                        None => None,
                    };
                    out.push(Stmt::Return { value, line: *line });
                }
            }
        }
        Ok(out)
    }

    fn lower_expr(&mut self, expr: &KtExpr, scope: EntityId) -> Result<Expr, ModelError> {
        let eid = self.ids.fresh_expr();
        Ok(match expr {
            KtExpr::Name { name, line } => Expr::Name {
                eid,
                name: name.clone(),
                line: *line,
            },
            KtExpr::Call { callee, args, line } => {
                let callee = Box::new(self.lower_expr(callee, scope)?);
                let mut lowered = Vec::new();
                for arg in args {
                    lowered.push(self.lower_expr(arg, scope)?);
                }
                Expr::Call {
                    eid,
                    callee,
                    args: lowered,
                    line: *line,
                }
            }
            KtExpr::Nav { recv, name, line } => Expr::Nav {
                eid,
                recv: Box::new(self.lower_expr(recv, scope)?),
                name: name.clone(),
                line: *line,
            },
            KtExpr::Cast { value, ty, line } => Expr::Cast {
                eid,
                value: Box::new(self.lower_expr(value, scope)?),
                type_name: ty.name.clone(),
                line: *line,
            },
            KtExpr::Assign {
                target,
                value,
                line,
            } => Expr::Assign {
                eid,
                target: Box::new(self.lower_expr(target, scope)?),
                value: Box::new(self.lower_expr(value, scope)?),
                line: *line,
            },
            KtExpr::Lambda(lambda) => {
                let lid = self.ids.fresh_lambda();
                let params = lambda
                    .params
                    .iter()
                    .map(|(name, ty)| LambdaParam {
                        name: name.clone(),
                        declared_type: ty.as_ref().map(|t| t.name.clone()),
                    })
                    .collect();
                let stmts = self.lower_stmts(&lambda.stmts, scope)?;
                Expr::Lambda(Lambda {
                    eid,
                    lid,
                    params,
                    stmts,
                    line: lambda.line,
                })
            }
            KtExpr::Lit { kind, line } => Expr::Lit {
                eid,
                ty: lit_ty(*kind),
                line: *line,
            },
            KtExpr::OpChain { operands, line } => {
                let mut lowered = Vec::new();
                for operand in operands {
                    lowered.push(self.lower_expr(operand, scope)?);
                }
                Expr::OpChain {
                    eid,
                    operands: lowered,
                    line: *line,
                }
            }
            KtExpr::If {
                cond,
                then_stmts,
                else_stmts,
                line,
            } => Expr::Branch {
                eid,
                cond: Box::new(self.lower_expr(cond, scope)?),
                then_stmts: self.lower_stmts(then_stmts, scope)?,
                else_stmts: self.lower_stmts(else_stmts, scope)?,
                line: *line,
            },
            KtExpr::While { cond, body, line } => Expr::Loop {
                eid,
                cond: Box::new(self.lower_expr(cond, scope)?),
                body: self.lower_stmts(body, scope)?,
                line: *line,
            },
            KtExpr::Unknown { line } => Expr::Unknown { eid, line: *line },
        })
    }
}

/// Head type name of a delegation expression: `b` stays `b`, `D()`
/// yields `D`. Resolution decides later whether the head is a value in
/// scope or a type.
fn delegate_head(expr: &KtExpr) -> Option<(String, u32)> {
    match expr {
        KtExpr::Name { name, line } => Some((name.clone(), *line)),
        KtExpr::Call { callee, line, .. } => match &**callee {
            KtExpr::Name { name, .. } => Some((name.clone(), *line)),
            _ => None,
        },
        _ => None,
    }
}

fn lit_ty(kind: KtLitKind) -> LitTy {
    match kind {
        KtLitKind::Int => LitTy::Int,
        KtLitKind::Long => LitTy::Long,
        KtLitKind::Double => LitTy::Double,
        KtLitKind::Float => LitTy::Float,
        KtLitKind::Boolean => LitTy::Boolean,
        KtLitKind::Char => LitTy::Char,
        KtLitKind::Str => LitTy::Str,
        KtLitKind::Null => LitTy::Null,
    }
}

/// Interns the implicit getter (and setter for `var`) of a Kotlin
/// property. The accessor name capitalizes only the first letter.
pub fn synthesize_accessors(tree: &mut EntityTree, property: EntityId) -> Vec<EntityId> {
    let (owner, prop_name, prop_type, language) = {
        let prop = tree.entity(property);
        (
            prop.parent,
            prop.name.clone(),
            prop.raw_return_type.clone(),
            prop.language,
        )
    };
    let capitalized = capitalize_first(&prop_name);
    let mut out = Vec::new();

    let mut getter = EntityProto::new(format!("get{capitalized}"), EntityKind::Function, language);
    getter.parent = owner;
    getter.is_synthetic = true;
    getter.raw_return_type = prop_type.clone();
    let getter_id = tree
        .intern(getter)
        .expect("synthetic accessors bypass the name index");
    tree.link_accessor(getter_id, property);
    out.push(getter_id);

    if tree.is_mutable_property(property) {
        let mut setter =
            EntityProto::new(format!("set{capitalized}"), EntityKind::Function, language);
        setter.parent = owner;
        setter.is_synthetic = true;
        if let Some(ty) = prop_type {
            setter.raw_parameter_types.push(ty);
        }
        let setter_id = tree
            .intern(setter)
            .expect("synthetic accessors bypass the name index");
        tree.link_accessor(setter_id, property);
        out.push(setter_id);
    }
    out
}

fn capitalize_first(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kotlin::parser::parse_kotlin;

    fn build(src: &str, path: &str) -> (EntityTree, FileBuild) {
        let mut tree = EntityTree::with_builtins();
        let mut ids = IrIds::new();
        let (ast, _) = parse_kotlin(src, path).unwrap();
        let build = build_kotlin_entities(&ast, path, &mut tree, &mut ids).unwrap();
        (tree, build)
    }

    fn qn(tree: &EntityTree, name: &str) -> EntityId {
        tree.by_qualified_name(name)
            .unwrap_or_else(|| panic!("missing entity `{name}`"))
    }

    #[test]
    fn receiver_lambda_source_yields_expected_entities() {
        let src = "class Bar(val x: Int)\nfun calculate(param: Bar.() -> Int) {}\nclass Foo(val x: Int) {\n    fun calculateInFoo() {\n        calculate { add(x) }\n    }\n}";
        let (tree, _) = build(src, "receiver_lambda.kt");
        for name in [
            "Bar",
            "Bar.x",
            "calculate",
            "Foo",
            "Foo.x",
            "Foo.calculateInFoo",
        ] {
            qn(&tree, name);
        }
    }

    #[test]
    fn extension_function_is_marked_with_receiver() {
        let (tree, _) = build("fun Int.twice(): Int = 0", "e.kt");
        let twice = qn(&tree, "twice");
        let entity = tree.entity(twice);
        assert!(entity.is_extension);
        assert_eq!(entity.receiver_type.as_ref().unwrap().raw_name, "Int");
    }

    #[test]
    fn empty_class_body_has_no_children() {
        let (tree, _) = build("class Empty {}", "e.kt");
        let id = qn(&tree, "Empty");
        assert!(tree.children(id).is_empty());
    }

    #[test]
    fn val_property_gets_only_a_getter() {
        let (tree, _) = build("class BarKotlin(val x: Int)", "b.kt");
        let class = qn(&tree, "BarKotlin");
        let names: Vec<&str> = tree
            .children(class)
            .iter()
            .map(|&c| tree.entity(c).name.as_str())
            .collect();
        assert_eq!(names, vec!["x", "getX"]);
        let getter = tree.children(class)[1];
        let e = tree.entity(getter);
        assert!(e.is_synthetic);
        assert_eq!(e.language, SourceLanguage::Kotlin);
        assert_eq!(
            tree.accessor_property(getter),
            tree.by_qualified_name("BarKotlin.x")
        );
    }

    #[test]
    fn var_property_gets_getter_and_setter() {
        let (tree, _) = build("class C {\n    var name: String = \"\"\n}", "c.kt");
        let class = qn(&tree, "C");
        let names: Vec<&str> = tree
            .children(class)
            .iter()
            .map(|&c| tree.entity(c).name.as_str())
            .collect();
        assert_eq!(names, vec!["name", "getName", "setName"]);
    }

    #[test]
    fn accessor_capitalizes_first_letter_only() {
        let (tree, _) = build("class C {\n    val url: String = \"\"\n}", "c.kt");
        let class = qn(&tree, "C");
        let names: Vec<&str> = tree
            .children(class)
            .iter()
            .map(|&c| tree.entity(c).name.as_str())
            .collect();
        assert!(names.contains(&"getUrl"));
    }

    #[test]
    fn accessor_count_matches_val_var_formula() {
        let src = "class C(val a: Int, var b: Int) {\n    val c: Int = 0\n    var d: Int = 0\n}";
        let (tree, _) = build(src, "c.kt");
        let synthetic = tree
            .entities()
            .filter(|e| e.is_synthetic && e.kind == EntityKind::Function)
            .count();
        // 2 vals + 2 vars -> 2 + 2*2 accessors.
        assert_eq!(synthetic, 6);
    }

    #[test]
    fn class_delegation_records_raw_target() {
        let (tree, _) = build("class A(b: B) : I by b", "a.kt");
        let a = qn(&tree, "A");
        let entity = tree.entity(a);
        assert_eq!(entity.delegates_to.as_ref().unwrap().raw_name, "b");
        assert_eq!(entity.raw_supertypes[0].raw_name, "I");
        // The plain constructor parameter is interned under the class.
        qn(&tree, "A.b");
    }

    #[test]
    fn property_delegation_records_provider_head() {
        let (tree, _) = build("class R {\n    val p by D()\n}", "r.kt");
        let p = qn(&tree, "R.p");
        assert_eq!(tree.entity(p).delegates_to.as_ref().unwrap().raw_name, "D");
    }

    #[test]
    fn locals_are_interned_under_their_function() {
        let (tree, build) = build("fun f(): Unit {\n    val b = 1\n}", "f.kt");
        let var = qn(&tree, "f.b");
        assert_eq!(tree.entity(var).kind, EntityKind::Variable);
        assert_eq!(build.bodies.len(), 1);
    }

    #[test]
    fn rebuilding_identical_input_is_deterministic() {
        let src = "class A(val x: Int) {\n    fun m(): Int { return x }\n}";
        let (tree1, _) = build(src, "a.kt");
        let (tree2, _) = build(src, "a.kt");
        assert_eq!(tree1.len(), tree2.len());
        for (a, b) in tree1.entities().zip(tree2.entities()) {
            assert_eq!(a.qualified_name, b.qualified_name);
            assert_eq!(a.id, b.id);
        }
    }
}
