"""Hot loops over CSR adjacency (``indptr``/``indices`` int64 arrays).

Everything here is compiled with numba unless ``NCPATH_DISABLE_NUMBA`` is set;
the bodies are written so the interpreted path computes identical results.
"""

import numpy as np

from ._jit import njit


@njit
def lexbfs(indptr, indices, seq0):
    """Lexicographic BFS by partition refinement; returns the visit order.

    ``seq0`` fixes the starting vertex (its first entry) and the tie-breaking.
    Classes are contiguous slices of ``seq``; a split moves the refined part to
    the front of its class, so the next vertex to visit is always ``seq[i+1]``.
    """
    n = seq0.shape[0]
    seq = seq0.copy()
    pos = np.empty(n, np.int64)
    for i in range(n):
        pos[seq[i]] = i
    cap = n + indices.shape[0] + 1
    cls = np.zeros(n, np.int64)
    cstart = np.zeros(cap, np.int64)
    stamp = np.full(cap, -1, np.int64)
    newc = np.zeros(cap, np.int64)
    ncls = 1
    for i in range(n):
        v = seq[i]
        cstart[cls[v]] = i + 1
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            pw = pos[w]
            if pw <= i:
                continue
            cw = cls[w]
            if stamp[cw] != i:
                stamp[cw] = i
                newc[cw] = ncls
                cstart[ncls] = cstart[cw]
                ncls += 1
            f = cstart[cw]
            u = seq[f]
            seq[f] = w
            seq[pw] = u
            pos[w] = f
            pos[u] = pw
            cstart[cw] = f + 1
            cls[w] = newc[cw]
    return seq


@njit
def peo_violation(indptr, indices, peo):
    """Check a perfect elimination ordering.

    Returns ``(v, p, w)`` where ``p`` is the earliest-eliminated later neighbour
    of ``v`` and ``w`` is another later neighbour not adjacent to ``p``; all
    three are -1 when ``peo`` is perfect.
    """
    n = peo.shape[0]
    rank = np.empty(n, np.int64)
    for i in range(n):
        rank[peo[i]] = i
    par = np.full(n, -1, np.int64)
    for v in range(n):
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if rank[w] > rank[v] and (par[v] == -1 or rank[w] < rank[par[v]]):
                par[v] = w
    # requirements grouped by parent: (v, w) with w in L(v) \ {p}
    cnt = np.zeros(n + 1, np.int64)
    for v in range(n):
        p = par[v]
        if p == -1:
            continue
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if rank[w] > rank[v] and w != p:
                cnt[p + 1] += 1
    for i in range(n):
        cnt[i + 1] += cnt[i]
    fill = cnt[:n].copy()
    req_v = np.empty(cnt[n], np.int64)
    req_w = np.empty(cnt[n], np.int64)
    for v in range(n):
        p = par[v]
        if p == -1:
            continue
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if rank[w] > rank[v] and w != p:
                req_v[fill[p]] = v
                req_w[fill[p]] = w
                fill[p] += 1
    mark = np.full(n, -1, np.int64)
    for p in range(n):
        if cnt[p] == cnt[p + 1]:
            continue
        for k in range(indptr[p], indptr[p + 1]):
            mark[indices[k]] = p
        for t in range(cnt[p], cnt[p + 1]):
            if mark[req_w[t]] != p:
                return req_v[t], p, req_w[t]
    return -1, -1, -1


@njit
def clique_tree_arrays(indptr, indices, peo):
    """Maximal cliques and a clique tree from a perfect elimination ordering.

    The candidate clique of ``v`` is ``v`` plus its later neighbours; it is
    maximal unless some ``u`` with parent ``v`` has exactly one more later
    neighbour. A maximal clique hangs below any maximal clique holding the
    candidate of the vertex its growth chain started from. Cliques are
    numbered in reverse elimination order.
    Returns ``(clique_ptr, clique_verts, clique_parent)``.
    """
    n = peo.shape[0]
    rank = np.empty(n, np.int64)
    for i in range(n):
        rank[peo[i]] = i
    lsize = np.zeros(n, np.int64)
    par = np.full(n, -1, np.int64)
    for v in range(n):
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if rank[w] > rank[v]:
                lsize[v] += 1
                if par[v] == -1 or rank[w] < rank[par[v]]:
                    par[v] = w
    maximal = np.ones(n, np.bool_)
    ext = np.full(n, -1, np.int64)
    for i in range(n):
        u = peo[i]
        p = par[u]
        if p != -1 and lsize[u] == lsize[p] + 1:
            maximal[p] = False
            if ext[p] == -1:
                ext[p] = u
    rep = np.empty(n, np.int64)
    for i in range(n):
        v = peo[i]
        if maximal[v]:
            rep[v] = v
        else:
            rep[v] = rep[ext[v]]
    # top[v]: where the chain of candidates growing into C_v starts; the
    # clique of v attaches through the separator L(top[v])
    top = np.empty(n, np.int64)
    for i in range(n - 1, -1, -1):
        v = peo[i]
        p = par[v]
        if p != -1 and ext[p] == v:
            top[v] = top[p]
        else:
            top[v] = v
    cid = np.full(n, -1, np.int64)
    nk = 0
    for i in range(n - 1, -1, -1):
        v = peo[i]
        if maximal[v]:
            cid[v] = nk
            nk += 1
    ptr = np.zeros(nk + 1, np.int64)
    owner = np.empty(nk, np.int64)
    for v in range(n):
        if maximal[v]:
            owner[cid[v]] = v
            ptr[cid[v] + 1] = lsize[v] + 1
    for x in range(nk):
        ptr[x + 1] += ptr[x]
    verts = np.empty(ptr[nk], np.int64)
    parent = np.full(nk, -1, np.int64)
    for x in range(nk):
        v = owner[x]
        t = ptr[x]
        placed = False
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if rank[w] > rank[v]:
                if not placed and w > v:
                    verts[t] = v
                    t += 1
                    placed = True
                verts[t] = w
                t += 1
        if not placed:
            verts[t] = v
        w = top[v]
        if par[w] != -1:
            parent[x] = cid[rep[par[w]]]
    return ptr, verts, parent


@njit
def vertex_paths(n, cptr, cverts, cparent):
    """Per-vertex occurrence lists, ordered along each vertex's path.

    Returns ``(status, bad_v, bad_x, occ_ptr, path_nodes, path_deg, slot_pos)``.
    status 0: every occurrence set is a path, listed end to end starting at
    the end with the smaller node id; ``path_deg`` is the degree of each node
    inside its path (0 or 1 means an end). status 1: ``bad_x`` has degree at
    least three inside the subtree of ``bad_v``. status 2: the cliques holding
    ``bad_v`` are not connected in the tree. ``slot_pos[t]`` is the position in
    ``path_nodes`` of the occurrence stored at clique slot ``t``.
    """
    nk = cparent.shape[0]
    occ_ptr = np.zeros(n + 1, np.int64)
    for t in range(cverts.shape[0]):
        occ_ptr[cverts[t] + 1] += 1
    for v in range(n):
        occ_ptr[v + 1] += occ_ptr[v]
    fill = occ_ptr[:n].copy()
    occ = np.empty(occ_ptr[n], np.int64)
    occ_slot = np.empty(occ_ptr[n], np.int64)
    for x in range(nk):
        for t in range(cptr[x], cptr[x + 1]):
            v = cverts[t]
            occ[fill[v]] = x
            occ_slot[fill[v]] = t
            fill[v] += 1
    s = occ.shape[0]
    up = np.full(s, -1, np.int64)
    c1 = np.full(s, -1, np.int64)
    c2 = np.full(s, -1, np.int64)
    deg = np.zeros(s, np.int64)
    stamp = np.full(nk, -1, np.int64)
    loc = np.zeros(nk, np.int64)
    path = np.empty(s, np.int64)
    pdeg = np.empty(s, np.int64)
    slot_pos = np.empty(s, np.int64)
    for v in range(n):
        a = occ_ptr[v]
        b = occ_ptr[v + 1]
        for j in range(a, b):
            stamp[occ[j]] = v
            loc[occ[j]] = j
        ntop = 0
        for j in range(a, b):
            p = cparent[occ[j]]
            if p != -1 and stamp[p] == v:
                i = loc[p]
                up[j] = i
                deg[j] += 1
                deg[i] += 1
                if c1[i] == -1:
                    c1[i] = j
                else:
                    c2[i] = j
            else:
                ntop += 1
        if ntop != 1:
            return 2, v, -1, occ_ptr, path, pdeg, slot_pos
        for j in range(a, b):
            if deg[j] >= 3:
                return 1, v, occ[j], occ_ptr, path, pdeg, slot_pos
        start = -1
        for j in range(a, b):
            if deg[j] <= 1 and (start == -1 or occ[j] < occ[start]):
                start = j
        prev = -1
        cur = start
        t = a
        while cur != -1:
            path[t] = occ[cur]
            pdeg[t] = deg[cur]
            slot_pos[occ_slot[cur]] = t
            t += 1
            nxt = -1
            if up[cur] != -1 and up[cur] != prev:
                nxt = up[cur]
            elif c1[cur] != -1 and c1[cur] != prev:
                nxt = c1[cur]
            elif c2[cur] != -1 and c2[cur] != prev:
                nxt = c2[cur]
            prev = cur
            cur = nxt
    return 0, -1, -1, occ_ptr, path, pdeg, slot_pos


@njit
def nesting_violation(group, lo, hi, order):
    """First strictly nested pair among intervals sharing a group label.

    ``order`` must sort the items by (group, lo, hi). Returns ``(inner, outer)``
    with ``lo[outer] < lo[inner]`` and ``hi[inner] < hi[outer]``, or (-1, -1).
    """
    best_hi = -1
    best = -1
    run_hi = -1
    run = -1
    for i in range(order.shape[0]):
        a = order[i]
        if i == 0 or group[a] != group[order[i - 1]]:
            best_hi = -1
            best = -1
            run_hi = -1
            run = -1
        elif lo[a] != lo[order[i - 1]]:
            # close the previous lo-group
            if run_hi > best_hi:
                best_hi = run_hi
                best = run
            run_hi = -1
            run = -1
        if best != -1 and hi[a] < best_hi:
            return a, best
        if hi[a] > run_hi:
            run_hi = hi[a]
            run = a
    return -1, -1


@njit
def component_labels(indptr, indices):
    n = indptr.shape[0] - 1
    label = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    nc = 0
    for r in range(n):
        if label[r] != -1:
            continue
        label[r] = nc
        head = 0
        tail = 1
        queue[0] = r
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if label[w] == -1:
                    label[w] = nc
                    queue[tail] = w
                    tail += 1
        nc += 1
    return label


@njit
def bfs_parents(indptr, indices, src, blocked):
    """BFS tree from ``src`` avoiding vertices with ``blocked`` set."""
    n = indptr.shape[0] - 1
    parent = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    parent[src] = src
    queue[0] = src
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if parent[w] == -1 and not blocked[w]:
                parent[w] = u
                queue[tail] = w
                tail += 1
    return parent


@njit
def biconnected(indptr, indices, eid, m):
    """Iterative Hopcroft-Tarjan over an explicit stack.

    ``eid`` maps each CSR slot to its undirected edge id. Returns
    ``(edge_block, is_cut, nblocks)``.
    """
    n = indptr.shape[0] - 1
    disc = np.full(n, -1, np.int64)
    low = np.zeros(n, np.int64)
    parent = np.full(n, -1, np.int64)
    pedge = np.full(n, -1, np.int64)
    nxt = indptr[:n].copy()
    vstack = np.empty(n, np.int64)
    estack = np.empty(m, np.int64)
    edge_block = np.full(m, -1, np.int64)
    is_cut = np.zeros(n, np.bool_)
    seen_edge = np.zeros(m, np.bool_)
    nb = 0
    clock = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = clock
        low[root] = clock
        clock += 1
        vtop = 1
        vstack[0] = root
        etop = 0
        root_children = 0
        while vtop > 0:
            u = vstack[vtop - 1]
            if nxt[u] < indptr[u + 1]:
                k = nxt[u]
                nxt[u] += 1
                w = indices[k]
                e = eid[k]
                if seen_edge[e]:
                    continue
                seen_edge[e] = True
                if disc[w] == -1:
                    parent[w] = u
                    pedge[w] = e
                    disc[w] = clock
                    low[w] = clock
                    clock += 1
                    estack[etop] = e
                    etop += 1
                    vstack[vtop] = w
                    vtop += 1
                    if u == root:
                        root_children += 1
                else:
                    if disc[w] < low[u]:
                        low[u] = disc[w]
                    estack[etop] = e
                    etop += 1
            else:
                vtop -= 1
                p = parent[u]
                if p == -1:
                    continue
                if low[u] < low[p]:
                    low[p] = low[u]
                if low[u] >= disc[p]:
                    if p != root:
                        is_cut[p] = True
                    # tree edge (p, u) was pushed before everything in u's subtree
                    while True:
                        etop -= 1
                        f = estack[etop]
                        edge_block[f] = nb
                        if f == pedge[u]:
                            break
                    nb += 1
        if root_children >= 2:
            is_cut[root] = True
    return edge_block, is_cut, nb



@njit
def bfs_order(indptr, indices):
    """Breadth-first visit order over all components, lowest unvisited start first."""
    n = indptr.shape[0] - 1
    seen = np.zeros(n, np.bool_)
    order = np.empty(n, np.int64)
    head = 0
    tail = 0
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        order[tail] = s
        tail += 1
        while head < tail:
            v = order[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if not seen[w]:
                    seen[w] = True
                    order[tail] = w
                    tail += 1
    return order


@njit
def permute_csr(indptr, indices, old_of_new, new_of_old):
    """CSR of the graph with vertex ``old_of_new[i]`` renamed to ``i``; rows sorted.

    Rows are filled by visiting new ids in increasing order and appending each
    one to its neighbours' rows, so no per-row sort is needed.
    """
    n = old_of_new.shape[0]
    ptr = np.zeros(n + 1, np.int64)
    for i in range(n):
        v = old_of_new[i]
        ptr[i + 1] = ptr[i] + indptr[v + 1] - indptr[v]
    fill = ptr[:n].copy()
    out = np.empty(indices.shape[0], np.int64)
    for i in range(n):
        v = old_of_new[i]
        for k in range(indptr[v], indptr[v + 1]):
            w = new_of_old[indices[k]]
            out[fill[w]] = i
            fill[w] += 1
    return ptr, out
