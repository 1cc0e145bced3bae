//! Entity extraction for parsed Java files. Fields become Property
//! entities; no accessor synthesis happens on the Java side.

use crate::ir::{Body, Expr, FileBuild, IrIds, LitTy, Stmt};
use crate::java::ast::*;
use crate::model::{
    EntityId, EntityKind, EntityProto, EntityTree, FileLocation, ImportDirective, ModelError,
    SourceLanguage, TypeRef,
};

pub fn build_java_entities(
    ast: &JFile,
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

    fn type_ref(&self, name: &JTypeName) -> TypeRef {
        TypeRef::new(name.name.clone(), self.path, name.line)
    }

    fn intern(&mut self, proto: EntityProto) -> Result<EntityId, ModelError> {
        let id = self.tree.intern(proto)?;
        self.entities.push(id);
        Ok(id)
    }

    fn build_file(&mut self, ast: &JFile) -> Result<EntityId, ModelError> {
        let package_name = ast.package.clone().unwrap_or_default();
        let package = self
            .tree
            .intern_package(&package_name, SourceLanguage::Java);
        let file_name = self
            .path
            .rsplit('/')
            .next()
            .unwrap_or(self.path)
            .to_string();
        let file = self.intern(
            EntityProto::new(file_name, EntityKind::File, SourceLanguage::Java)
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
                    is_static: import.is_static,
                    resolved: None,
                },
            );
        }
        for ty in &ast.types {
            self.build_type(ty, package)?;
        }
        Ok(file)
    }

    fn build_type(&mut self, ty: &JType, parent: EntityId) -> Result<(), ModelError> {
        let mut proto = EntityProto::new(&ty.name, EntityKind::Type, SourceLanguage::Java)
            .with_parent(parent)
            .with_location(self.loc(ty.line, ty.end_line));
        for supertype in ty.extends.iter().chain(ty.implements.iter()) {
            proto.raw_supertypes.push(self.type_ref(supertype));
        }
        let type_id = self.intern(proto)?;
        if ty.kind == JTypeKind::Interface {
            self.tree.mark_interface(type_id);
        }
        for annotation in &ty.annotations {
            let r = TypeRef::new(annotation.name.clone(), self.path, annotation.line);
            self.tree.add_annotation(type_id, r);
        }
        for member in &ty.members {
            match member {
                JMember::Field(field) => self.build_field(field, type_id)?,
                JMember::Method(method) => self.build_method(method, type_id)?,
                JMember::EnumConstant { name, line } => {
                    let mut constant =
                        EntityProto::new(name, EntityKind::Property, SourceLanguage::Java)
                            .with_parent(type_id)
                            .with_location(self.loc(*line, *line));
                    // An enum constant is typed as its own enum.
                    constant.raw_return_type =
                        Some(TypeRef::new(ty.name.clone(), self.path, *line));
                    self.intern(constant)?;
                }
            }
        }
        Ok(())
    }

    fn build_field(&mut self, field: &JField, parent: EntityId) -> Result<(), ModelError> {
        let mut proto = EntityProto::new(&field.name, EntityKind::Property, SourceLanguage::Java)
            .with_parent(parent)
            .with_location(self.loc(field.line, field.line));
        proto.raw_return_type = Some(self.type_ref(&field.ty));
        let field_id = self.intern(proto)?;
        for annotation in &field.annotations {
            let r = TypeRef::new(annotation.name.clone(), self.path, annotation.line);
            self.tree.add_annotation(field_id, r);
        }
        if let Some(init) = &field.init {
            let value = self.lower_expr(init, field_id)?;
            let stmts = vec![Stmt::Return {
                value: Some(value),
                line: init.line(),
            }];
            self.bodies.push(Body {
                owner: field_id,
                path: self.path.to_string(),
                stmts,
            });
        }
        Ok(())
    }

    fn build_method(&mut self, method: &JMethod, parent: EntityId) -> Result<(), ModelError> {
        let mut proto = EntityProto::new(&method.name, EntityKind::Function, SourceLanguage::Java)
            .with_parent(parent)
            .with_location(self.loc(method.line, method.end_line));
        if let Some(ret) = &method.return_type {
            proto.raw_return_type = Some(self.type_ref(ret));
        }
        for param in &method.params {
            proto.raw_parameter_types.push(self.type_ref(&param.ty));
        }
        let fn_id = self.intern(proto)?;
        for annotation in &method.annotations {
            let r = TypeRef::new(annotation.name.clone(), self.path, annotation.line);
            self.tree.add_annotation(fn_id, r);
        }
        for param in &method.params {
            let mut p = EntityProto::new(&param.name, EntityKind::Parameter, SourceLanguage::Java)
                .with_parent(fn_id)
                .with_location(self.loc(param.line, param.line));
            p.raw_return_type = Some(self.type_ref(&param.ty));
            self.intern(p)?;
        }
        if let Some(body) = &method.body {
            let stmts = self.lower_stmts(body, fn_id)?;
            self.bodies.push(Body {
                owner: fn_id,
                path: self.path.to_string(),
                stmts,
            });
        }
        Ok(())
    }

    fn lower_stmts(&mut self, stmts: &[JStmt], scope: EntityId) -> Result<Vec<Stmt>, ModelError> {
        let mut out = Vec::new();
        for stmt in stmts {
            match stmt {
                JStmt::Local {
                    name,
                    ty,
                    init,
                    line,
                } => {
                    let mut proto =
                        EntityProto::new(name, EntityKind::Variable, SourceLanguage::Java)
                            .with_parent(scope)
                            .with_location(self.loc(*line, *line));
                    proto.raw_return_type = Some(self.type_ref(ty));
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
                JStmt::Expr(expr) => out.push(Stmt::Expr(self.lower_expr(expr, scope)?)),
                JStmt::Return { value, line } => {
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

    fn lower_expr(&mut self, expr: &JExpr, scope: EntityId) -> Result<Expr, ModelError> {
        let eid = self.ids.fresh_expr();
        Ok(match expr {
            JExpr::Name { name, line } => Expr::Name {
                eid,
                name: name.clone(),
                line: *line,
            },
            JExpr::Call { callee, args, line } => {
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
            JExpr::New {
                type_name,
                args,
                line,
            } => {
                let mut lowered = Vec::new();
                for arg in args {
                    lowered.push(self.lower_expr(arg, scope)?);
                }
                Expr::New {
                    eid,
                    type_name: type_name.clone(),
                    args: lowered,
                    line: *line,
                }
            }
            JExpr::Nav { recv, name, line } => Expr::Nav {
                eid,
                recv: Box::new(self.lower_expr(recv, scope)?),
                name: name.clone(),
                line: *line,
            },
            JExpr::Cast { ty, value, line } => Expr::Cast {
                eid,
                value: Box::new(self.lower_expr(value, scope)?),
                type_name: ty.name.clone(),
                line: *line,
            },
            JExpr::Assign {
                target,
                value,
                line,
            } => Expr::Assign {
                eid,
                target: Box::new(self.lower_expr(target, scope)?),
                value: Box::new(self.lower_expr(value, scope)?),
                line: *line,
            },
            JExpr::Lit { kind, line } => Expr::Lit {
                eid,
                ty: lit_ty(*kind),
                line: *line,
            },
            JExpr::OpChain { operands, line } => {
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
            JExpr::If {
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
            JExpr::While { cond, body, line } => Expr::Loop {
                eid,
                cond: Box::new(self.lower_expr(cond, scope)?),
                body: self.lower_stmts(body, scope)?,
                line: *line,
            },
            JExpr::Unknown { line } => Expr::Unknown { eid, line: *line },
        })
    }
}

fn lit_ty(kind: JLitKind) -> LitTy {
    match kind {
        JLitKind::Int => LitTy::Int,
        JLitKind::Long => LitTy::Long,
        JLitKind::Double => LitTy::Double,
        JLitKind::Float => LitTy::Float,
        JLitKind::Boolean => LitTy::Boolean,
        JLitKind::Char => LitTy::Char,
        JLitKind::Str => LitTy::Str,
        JLitKind::Null => LitTy::Null,
    }
}
