//! Syntax tree for the Kotlin-style subset.

#[derive(Debug)]
pub struct KtFile {
    pub package: Option<String>,
    pub imports: Vec<KtImport>,
    pub decls: Vec<KtDecl>,
    pub end_line: u32,
}

#[derive(Debug)]
pub struct KtImport {
    pub path: String,
    pub wildcard: bool,
    pub line: u32,
}

#[derive(Debug)]
pub enum KtDecl {
    Class(KtClass),
    Function(KtFunction),
    Property(KtProperty),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KtClassKind {
    Class,
    Interface,
    Object,
    AnnotationClass,
}

#[derive(Debug)]
pub struct KtClass {
    pub name: String,
    pub kind: KtClassKind,
    pub annotations: Vec<KtAnnotation>,
    pub ctor_params: Vec<KtCtorParam>,
    pub supertypes: Vec<KtSupertype>,
    pub members: Vec<KtDecl>,
    pub line: u32,
    pub end_line: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KtBinding {
    None,
    Val,
    Var,
}

#[derive(Debug)]
pub struct KtCtorParam {
    pub name: String,
    pub ty: KtTypeUse,
    pub binding: KtBinding,
    pub line: u32,
}

#[derive(Debug)]
pub struct KtSupertype {
    /// Dotted type name as written.
    pub name: String,
    /// A `by` clause delegating the supertype's implementation.
    pub delegate: Option<KtExpr>,
    pub line: u32,
}

#[derive(Debug)]
pub struct KtAnnotation {
    pub name: String,
    pub line: u32,
}

#[derive(Debug)]
pub struct KtFunction {
    pub name: String,
    pub receiver: Option<KtTypeName>,
    pub params: Vec<KtParam>,
    pub return_type: Option<KtTypeName>,
    pub body: Option<KtBody>,
    pub annotations: Vec<KtAnnotation>,
    pub line: u32,
    pub end_line: u32,
}

#[derive(Debug)]
pub struct KtParam {
    pub name: String,
    pub ty: KtTypeUse,
    pub line: u32,
}

/// A plain dotted type name occurrence.
#[derive(Debug, Clone)]
pub struct KtTypeName {
    pub name: String,
    pub line: u32,
}

/// A parameter type: either a plain name or a function type, possibly
/// with a receiver (`Bar.() -> Int`).
#[derive(Debug)]
pub enum KtTypeUse {
    Plain(KtTypeName),
    Function {
        receiver: Option<KtTypeName>,
        params: Vec<KtTypeName>,
        ret: Option<KtTypeName>,
        line: u32,
    },
}

impl KtTypeUse {
    /// Raw text used for the entity-level parameter TypeRef.
    pub fn raw_text(&self) -> String {
        match self {
            KtTypeUse::Plain(t) => t.name.clone(),
            KtTypeUse::Function {
                receiver,
                params,
                ret,
                ..
            } => {
                let mut s = String::new();
                if let Some(r) = receiver {
                    s.push_str(&r.name);
                    s.push('.');
                }
                s.push('(');
                s.push_str(
                    &params
                        .iter()
                        .map(|p| p.name.clone())
                        .collect::<Vec<_>>()
                        .join(", "),
                );
                s.push_str(") -> ");
                s.push_str(ret.as_ref().map(|r| r.name.as_str()).unwrap_or("Unit"));
                s
            }
        }
    }

    pub fn line(&self) -> u32 {
        match self {
            KtTypeUse::Plain(t) => t.line,
            KtTypeUse::Function { line, .. } => *line,
        }
    }
}

#[derive(Debug)]
pub struct KtProperty {
    pub name: String,
    pub mutable: bool,
    pub ty: Option<KtTypeName>,
    pub init: Option<KtExpr>,
    pub delegate: Option<KtExpr>,
    pub annotations: Vec<KtAnnotation>,
    pub line: u32,
}

#[derive(Debug)]
pub enum KtBody {
    Block(Vec<KtStmt>),
    Expr(KtExpr),
}

#[derive(Debug)]
pub enum KtStmt {
    Local {
        name: String,
        mutable: bool,
        ty: Option<KtTypeName>,
        init: Option<KtExpr>,
        line: u32,
    },
    Expr(KtExpr),
    Return {
        value: Option<KtExpr>,
        line: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KtLitKind {
    Int,
    Long,
    Double,
    Float,
    Boolean,
    Char,
    Str,
    Null,
}

#[derive(Debug)]
pub struct KtLambda {
    pub params: Vec<(String, Option<KtTypeName>)>,
    pub stmts: Vec<KtStmt>,
    pub line: u32,
}

#[derive(Debug)]
pub enum KtExpr {
    Name {
        name: String,
        line: u32,
    },
    Call {
        callee: Box<KtExpr>,
        args: Vec<KtExpr>,
        line: u32,
    },
    Nav {
        recv: Box<KtExpr>,
        name: String,
        line: u32,
    },
    Cast {
        value: Box<KtExpr>,
        ty: KtTypeName,
        line: u32,
    },
    Assign {
        target: Box<KtExpr>,
        value: Box<KtExpr>,
        line: u32,
    },
    Lambda(KtLambda),
    Lit {
        kind: KtLitKind,
        line: u32,
    },
    OpChain {
        operands: Vec<KtExpr>,
        line: u32,
    },
    If {
        cond: Box<KtExpr>,
        then_stmts: Vec<KtStmt>,
        else_stmts: Vec<KtStmt>,
        line: u32,
    },
    While {
        cond: Box<KtExpr>,
        body: Vec<KtStmt>,
        line: u32,
    },
    Unknown {
        line: u32,
    },
}

impl KtExpr {
    pub fn line(&self) -> u32 {
        match self {
            KtExpr::Name { line, .. }
            | KtExpr::Call { line, .. }
            | KtExpr::Nav { line, .. }
            | KtExpr::Cast { line, .. }
            | KtExpr::Assign { line, .. }
            | KtExpr::Lit { line, .. }
            | KtExpr::OpChain { line, .. }
            | KtExpr::If { line, .. }
            | KtExpr::While { line, .. }
            | KtExpr::Unknown { line } => *line,
            KtExpr::Lambda(l) => l.line,
        }
    }
}
