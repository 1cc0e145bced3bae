//! Syntax tree for the Java-style subset.

#[derive(Debug)]
pub struct JFile {
    pub package: Option<String>,
    pub imports: Vec<JImport>,
    pub types: Vec<JType>,
    pub end_line: u32,
}

#[derive(Debug)]
pub struct JImport {
    pub path: String,
    pub is_static: bool,
    pub wildcard: bool,
    pub line: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JTypeKind {
    Class,
    Interface,
    Enum,
    Annotation,
}

#[derive(Debug)]
pub struct JType {
    pub name: String,
    pub kind: JTypeKind,
    pub annotations: Vec<JAnnotation>,
    pub extends: Vec<JTypeName>,
    pub implements: Vec<JTypeName>,
    pub members: Vec<JMember>,
    pub line: u32,
    pub end_line: u32,
}

#[derive(Debug)]
pub struct JAnnotation {
    pub name: String,
    pub line: u32,
}

#[derive(Debug, Clone)]
pub struct JTypeName {
    pub name: String,
    pub line: u32,
}

#[derive(Debug)]
pub enum JMember {
    Field(JField),
    Method(JMethod),
    EnumConstant { name: String, line: u32 },
}

#[derive(Debug)]
pub struct JField {
    pub name: String,
    pub ty: JTypeName,
    pub init: Option<JExpr>,
    pub annotations: Vec<JAnnotation>,
    pub line: u32,
}

#[derive(Debug)]
pub struct JMethod {
    pub name: String,
    /// None for constructors.
    pub return_type: Option<JTypeName>,
    pub params: Vec<JParam>,
    pub body: Option<Vec<JStmt>>,
    pub annotations: Vec<JAnnotation>,
    pub is_constructor: bool,
    pub line: u32,
    pub end_line: u32,
}

#[derive(Debug)]
pub struct JParam {
    pub name: String,
    pub ty: JTypeName,
    pub line: u32,
}

#[derive(Debug)]
pub enum JStmt {
    Local {
        name: String,
        ty: JTypeName,
        init: Option<JExpr>,
        line: u32,
    },
    Expr(JExpr),
    Return {
        value: Option<JExpr>,
        line: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JLitKind {
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
pub enum JExpr {
    Name {
        name: String,
        line: u32,
    },
    Call {
        callee: Box<JExpr>,
        args: Vec<JExpr>,
        line: u32,
    },
    New {
        type_name: String,
        args: Vec<JExpr>,
        line: u32,
    },
    Nav {
        recv: Box<JExpr>,
        name: String,
        line: u32,
    },
    Cast {
        ty: JTypeName,
        value: Box<JExpr>,
        line: u32,
    },
    Assign {
        target: Box<JExpr>,
        value: Box<JExpr>,
        line: u32,
    },
    Lit {
        kind: JLitKind,
        line: u32,
    },
    OpChain {
        operands: Vec<JExpr>,
        line: u32,
    },
    If {
        cond: Box<JExpr>,
        then_stmts: Vec<JStmt>,
        else_stmts: Vec<JStmt>,
        line: u32,
    },
    While {
        cond: Box<JExpr>,
        body: Vec<JStmt>,
        line: u32,
    },
    Unknown {
        line: u32,
    },
}

impl JExpr {
    pub fn line(&self) -> u32 {
        match self {
            JExpr::Name { line, .. }
            | JExpr::Call { line, .. }
            | JExpr::New { line, .. }
            | JExpr::Nav { line, .. }
            | JExpr::Cast { line, .. }
            | JExpr::Assign { line, .. }
            | JExpr::Lit { line, .. }
            | JExpr::OpChain { line, .. }
            | JExpr::If { line, .. }
            | JExpr::While { line, .. }
            | JExpr::Unknown { line } => *line,
        }
    }
}
